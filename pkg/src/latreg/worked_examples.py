"""Golden worked examples with hard-coded inputs.

Each demo returns a ``Report`` whose ``verdict`` says whether the expected
outcome was reproduced, and prints intermediate matrices when ``verbose``.
"""

from __future__ import annotations

import time

import numpy as np

from .errors import ContractError
from .positivity import is_psd
from .regularity import (
    brehmer_operator,
    build_tilde_gram,
    check_brehmer,
    check_condition_star,
    check_regular_sampled,
    double_tuple,
    factorize_brehmer,
)
from .report import Report, elapsed_ms
from .representation import JORDAN_BLOCK, Representation, generate

DEMO_NAMES = ("counterexample", "brehmer-factorization-n2", "condition-star-tour")
LAYOUT_TOL = 1e-10


def _show(verbose: bool, label: str, M) -> None:
    if verbose:
        with np.printoptions(precision=4, suppress=True):
            print(f"{label} =\n{np.real_if_close(np.asarray(M))}")


def _counterexample(verbose: bool) -> Report:
    rep = Representation((JORDAN_BLOCK, JORDAN_BLOCK), "jordan-counterexample")
    brehmer = check_brehmer(rep)
    Z12 = brehmer_operator(rep, [1, 2])
    eig = np.linalg.eigvalsh(Z12)
    _show(verbose, "T_1 = T_2", JORDAN_BLOCK)
    _show(verbose, "T_1 T_2", JORDAN_BLOCK @ JORDAN_BLOCK)
    _show(verbose, "Z_{1,2}", Z12)
    window = check_regular_sampled(rep, max_entry=1, extra_random=0)
    expected = np.diag([1.0, -1.0])
    reproduced = (np.max(np.abs(Z12 - expected)) <= 1e-14 and not brehmer.verdict
                  and brehmer.witness == [1, 2] and not window.verdict)
    if verbose:
        print(f"eigenvalues of Z_{{1,2}}: {eig}")
        print(f"failing window: {window.witness}  lambda_min = {window.lambda_min:.6f}")
    return Report(
        check="demo:counterexample",
        verdict=bool(reproduced),
        lambda_min=float(eig[0]),
        witness=brehmer.witness,
        tolerances={"entrywise": 1e-14, **brehmer.tolerances},
        details={"Z_12": Z12.real, "Z_12_eigenvalues": eig, "regular": False,
                 "conclusion": "not regular", "window_witness": window.witness,
                 "window_lambda_min": window.lambda_min},
    )


def expected_r2_layout(a: complex, b: complex) -> np.ndarray:
    """Hand-written ``R`` for scalar generators ``T_1 = a``, ``T_2 = b``.

    Rows and columns run over ``{1,2}, {2}, {1}, {}``.
    """
    z1 = np.sqrt(1 - abs(a) ** 2)
    z2 = np.sqrt(1 - abs(b) ** 2)
    z12 = z1 * z2
    return np.array([
        [1, a, b, a * b],
        [0, z1, 0, z1 * b],
        [0, 0, z2, z2 * a],
        [0, 0, 0, z12],
    ], dtype=complex)


def _brehmer_n2(a: complex, b: complex, verbose: bool) -> Report:
    rep = Representation((np.array([[a]], dtype=complex), np.array([[b]], dtype=complex)),
                         f"scalar(a={a}, b={b})")
    fact = factorize_brehmer(rep)
    R = fact.dense_R()
    layout = expected_r2_layout(a, b)
    layout_err = float(np.max(np.abs(R - layout)))
    _show(verbose, "X_2", fact.X.dense())
    _show(verbose, "R_2", R)
    if verbose:
        print(f"||R*R - X|| = {fact.residual:.3e}, layout error {layout_err:.3e}, "
              f"R is {fact.triangularity()} triangular")
    ok = layout_err <= LAYOUT_TOL and fact.residual <= LAYOUT_TOL
    return Report(
        check="demo:brehmer-factorization-n2",
        verdict=bool(ok),
        tolerances={"layout": LAYOUT_TOL, "residual": LAYOUT_TOL},
        details={"a": a, "b": b, "order": [list(u) for u in fact.labels], "R": R,
                 "X": fact.X.dense(), "residual": fact.residual, "layout_error": layout_err,
                 "triangularity": fact.triangularity(),
                 "telescoping_defect": fact.telescoping_defect},
    )


def _star_tour(verbose: bool) -> Report:
    jordan = generate("jordan-counterexample")
    tensor = generate("doubly-commuting-tensor", n=2, d=2, seed=7)
    stops = [
        ("jordan", jordan, ((0, 0),), (1, 0), True),
        ("jordan", jordan, ((1, 0), (0, 0)), (0, 1), False),
        ("tensor", tensor, ((0, 0),), (1, 0), True),
        ("tensor", tensor, ((1, 0), (0, 0)), (0, 1), True),
        ("tensor", tensor, ((1, 0), (0, 0), (1, 1)), (0, 0), True),
    ]
    rows, ok = [], True
    for name, rep, t, g, expected in stops:
        star = check_condition_star(rep, t, g)
        doubled = double_tuple(t, g)
        window_psd = is_psd(build_tilde_gram(rep, doubled))
        agree = bool(star) == bool(window_psd)
        ok = ok and agree and bool(star) == expected
        rows.append({"rep": name, "tuple": t, "g": g, "star": bool(star),
                     "star_lambda_min": star.lambda_min, "doubled": doubled.elems,
                     "doubled_psd": bool(window_psd), "expected": expected})
        if verbose:
            print(f"{name:6s} t={t} g={g}: star {'holds' if star else 'fails'} "
                  f"(lambda_min {star.lambda_min:+.4f}); doubled window "
                  f"{'PSD' if window_psd else 'not PSD'}")
    return Report(check="demo:condition-star-tour", verdict=ok, details={"stops": rows})


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


def run_demo(name: str, verbose: bool = False, a=0.6, b=0.8) -> Report:
    """Reproduce one of ``DEMO_NAMES``; ``a`` and ``b`` feed the scalar factorization demo."""
    start = time.perf_counter()
    if name == "counterexample":
        report = _counterexample(verbose)
    elif name == "brehmer-factorization-n2":
        report = _brehmer_n2(_as_complex(a), _as_complex(b), verbose)
    elif name == "condition-star-tour":
        report = _star_tour(verbose)
    else:
        raise ContractError(f"unknown demo {name!r}; expected one of {DEMO_NAMES}")
    report.runtime_ms = elapsed_ms(start)
    return report
