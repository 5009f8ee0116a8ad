"""Contractive representations of ``Z_+^n`` by commuting matrices.

A representation is fixed by its generators ``T_1, ..., T_n``; it sends the
positive vector ``p`` to ``T(p) = T_1^{p_1} ... T_n^{p_n}`` and extends to all of
``Z^n`` by ``T~(g) = T(g_-)^* T(g_+)``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, StructuralError
from .lattice import Element, ZnGroup, pos_neg_parts
from .positivity import DEFAULT_TOL, loewner_leq
from .report import Report, elapsed_ms

COMMUTE_TOL = 1e-12
CONTRACTION_TOL = 1e-12
NICA_TOL = 1e-10
# Generated operators are divided by max(1, sigma_max * (1 + SCALE_MARGIN)).
SCALE_MARGIN = 1e-15

GENERATOR_KINDS = (
    "doubly-commuting-tensor",
    "column-contraction",
    "commuting-polynomial",
    "diagonal-unitary",
    "jordan-counterexample",
)

JORDAN_BLOCK = np.array([[0, 1], [0, 0]], dtype=complex)


def spectral_norm(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def coords(p) -> tuple[int, ...]:
    """Integer coordinates of a ``ZnGroup`` element or any integer sequence."""
    if isinstance(p, Element):
        if not isinstance(p.group, ZnGroup):
            raise StructuralError(f"expected a Z^n element, got {p.group!r}")
        return p.value
    return tuple(int(c) for c in p)


@dataclass(frozen=True, eq=False)
class Representation:
    """``n`` commuting contractions acting on ``C^d``.

    Construction validates pairwise commutation and contractivity at the
    module tolerances and raises ``ContractError`` otherwise.
    """

    gens: tuple[np.ndarray, ...]
    label: str = ""
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = []
        for T in self.gens:
            T = np.array(T, dtype=complex)
            if T.ndim != 2 or T.shape[0] != T.shape[1]:
                raise StructuralError(f"generators must be square matrices, got {T.shape}")
            T.setflags(write=False)
            gens.append(T)
        if not gens:
            raise StructuralError("a representation needs at least one generator")
        if len({T.shape for T in gens}) != 1:
            raise StructuralError("generators have different sizes")
        object.__setattr__(self, "gens", tuple(gens))
        for i, T in enumerate(gens):
            s = spectral_norm(T)
            if s > 1 + CONTRACTION_TOL:
                raise ContractError(f"generator {i + 1} has norm {s!r} > 1")
        for i, j in itertools.combinations(range(len(gens)), 2):
            Ti, Tj = gens[i], gens[j]
            defect = spectral_norm(Ti @ Tj - Tj @ Ti)
            if defect > COMMUTE_TOL * max(1.0, spectral_norm(Ti) * spectral_norm(Tj)):
                raise ContractError(f"generators {i + 1} and {j + 1} do not commute (defect {defect:.3e})")

    @property
    def n(self) -> int:
        return len(self.gens)

    @property
    def d(self) -> int:
        return self.gens[0].shape[0]

    @property
    def group(self) -> ZnGroup:
        return ZnGroup(self.n)

    def power(self, i: int, k: int) -> np.ndarray:
        """``T_i^k`` (0-based ``i``), cached."""
        key = (i, k)
        if key not in self._powers:
            self._powers[key] = np.linalg.matrix_power(self.gens[i], k)
        return self._powers[key]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "gens": [[[[float(z.real), float(z.imag)] for z in row] for row in T] for T in self.gens],
            "label": self.label,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Representation":
        gens = [np.array([[complex(re, im) for re, im in row] for row in T]) for T in obj["gens"]]
        rep = cls(tuple(gens), obj.get("label", ""))
        if "n" in obj and obj["n"] != rep.n or "d" in obj and obj["d"] != rep.d:
            raise StructuralError("declared n/d do not match the generator data")
        return rep


@dataclass(frozen=True)
class ExtendedValue:
    """``T~(g) = T(g_-)^* T(g_+)`` together with the parts it was built from."""

    matrix: np.ndarray
    gplus: Element
    gminus: Element


def evaluate(rep: Representation, p) -> np.ndarray:
    """``T(p)`` for a positive ``p``; ``T(e)`` is the identity."""
    v = coords(p)
    if len(v) != rep.n:
        raise StructuralError(f"expected {rep.n} coordinates, got {len(v)}")
    if any(c < 0 for c in v):
        raise ContractError(f"{v} is not in the positive cone")
    out = np.eye(rep.d, dtype=complex)
    for i, k in enumerate(v):
        if k:
            out = out @ rep.power(i, k)
    return out


def evaluate_tilde(rep: Representation, g) -> ExtendedValue:
    """``T~(g) = T(g_-)^* T(g_+)`` for any integer vector ``g``."""
    v = coords(g)
    if len(v) != rep.n:
        raise StructuralError(f"expected {rep.n} coordinates, got {len(v)}")
    gplus, gminus = pos_neg_parts(rep.group.element(v))
    M = evaluate(rep, gminus).conj().T @ evaluate(rep, gplus)
    return ExtendedValue(M, gplus, gminus)


def _random_disjoint_tuple(rng, n: int, max_entry: int) -> list[tuple[int, ...]]:
    """Nonzero vectors with pairwise disjoint supports and entries in 1..max_entry."""
    labels = rng.integers(-1, n, size=n)  # -1 leaves a coordinate unused
    if np.all(labels < 0):
        labels[int(rng.integers(n))] = 0
    out = []
    for lab in sorted(set(int(x) for x in labels if x >= 0)):
        v = [int(rng.integers(1, max_entry + 1)) if labels[c] == lab else 0 for c in range(n)]
        out.append(tuple(v))
    return out


def check_nica(rep: Representation, seed: int = 0, samples: int = 50, tol: float = NICA_TOL) -> Report:
    """Test ``T(s) T(t)^* = T(t)^* T(s)`` for disjoint ``s, t``.

    On ``Z_+^n`` the generator pairs decide the question; 50 random pairs with
    disjoint supports are checked as well.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    pairs = []
    for i, j in itertools.permutations(range(rep.n), 2):
        s = tuple(int(c == i) for c in range(rep.n))
        t = tuple(int(c == j) for c in range(rep.n))
        pairs.append((s, t))
    if rep.n >= 2:
        for _ in range(samples):
            vs = _random_disjoint_tuple(rng, rep.n, 3)
            while len(vs) < 2:
                vs = _random_disjoint_tuple(rng, rep.n, 3)
            pairs.append((vs[0], vs[1]))
    worst, witness, ok = 0.0, None, True
    for s, t in pairs:
        Ts, Tt = evaluate(rep, s), evaluate(rep, t)
        defect = spectral_norm(Ts @ Tt.conj().T - Tt.conj().T @ Ts)
        scale = max(1.0, spectral_norm(Ts) * spectral_norm(Tt))
        if defect > tol * scale:
            ok = False
        if defect > worst:
            worst, witness = defect, {"s": s, "t": t}
    return Report(
        check="nica",
        verdict=ok,
        witness=witness if not ok else None,
        tolerances={"nica": tol},
        seed=seed,
        runtime_ms=elapsed_ms(start),
        details={"max_defect": worst, "pairs_checked": len(pairs), "worst_pair": witness},
    )


def check_row_column(rep: Representation, mode: str = "column", seed: int = 0,
                     samples: int = 100, max_entry: int = 3, tol: float = DEFAULT_TOL) -> Report:
    """Test ``sum T(p_i)T(p_i)^* <= I`` (row) or ``sum T(p_i)^*T(p_i) <= I`` (column).

    The tuples are every nonempty set of generators plus ``samples`` random
    families of nonzero vectors with disjoint supports.
    """
    if mode not in ("row", "column"):
        raise ValueError(f"mode must be 'row' or 'column', got {mode!r}")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = rep.n
    families: list[list[tuple[int, ...]]] = []
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            families.append([tuple(int(c == i) for c in range(n)) for i in subset])
    families += [_random_disjoint_tuple(rng, n, max_entry) for _ in range(samples)]
    identity = np.eye(rep.d)
    ok, worst, witness = True, np.inf, None
    for fam in families:
        S = np.zeros((rep.d, rep.d), dtype=complex)
        for p in fam:
            Tp = evaluate(rep, p)
            S += Tp @ Tp.conj().T if mode == "row" else Tp.conj().T @ Tp
        v = loewner_leq(S, identity, tol)
        if v.lambda_min < worst:
            worst = v.lambda_min
            if not v:
                witness = fam
        ok = ok and v.ok
    return Report(
        check=f"{mode}-contractive",
        verdict=ok,
        lambda_min=float(worst),
        witness=witness,
        tolerances={"psd": tol},
        seed=seed,
        runtime_ms=elapsed_ms(start),
        details={"families_checked": len(families)},
    )


def _random_complex(rng, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def contraction_scale(M: np.ndarray) -> np.ndarray:
    return M / max(1.0, spectral_norm(M) * (1 + SCALE_MARGIN))


def _random_contraction(rng, d: int) -> np.ndarray:
    G = _random_complex(rng, d)
    target = rng.uniform(0.5, 1.0)
    return contraction_scale(G * (target / spectral_norm(G)))


def _random_poly(rng, S: np.ndarray, S2: np.ndarray) -> np.ndarray:
    c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    return c[0] * np.eye(S.shape[0]) + c[1] * S + c[2] * S2


def generate(kind: str, n: int = 2, d: int = 2, seed: int = 0) -> Representation:
    """Seeded representation from one of the ``GENERATOR_KINDS`` families.

    ``doubly-commuting-tensor`` acts on ``C^(d^n)``; the other kinds on ``C^d``.
    """
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}")
    if n < 1 or d < 1:
        raise ContractError(f"invalid sizes n={n}, d={d}")
    label = f"{kind}(n={n}, d={d}, seed={seed})"
    rng = np.random.default_rng(seed)

    if kind == "jordan-counterexample":
        if (n, d) != (2, 2):
            raise ContractError("the Jordan counterexample has n=2, d=2")
        return Representation((JORDAN_BLOCK, JORDAN_BLOCK), "jordan-counterexample")

    if kind == "doubly-commuting-tensor":
        gens = []
        for i in range(n):
            factors = [np.eye(d)] * n
            factors[i] = _random_contraction(rng, d)
            gens.append(contraction_scale(_kron_all(factors)))
        return Representation(tuple(gens), label)

    if kind == "diagonal-unitary":
        gens = [np.diag(np.exp(2j * np.pi * rng.random(d))) for _ in range(n)]
        return Representation(tuple(gens), label)

    S = _random_contraction(rng, d)
    S2 = S @ S
    polys = [_random_poly(rng, S, S2) for _ in range(n)]

    if kind == "commuting-polynomial":
        gens = []
        for P in polys:
            P = P * (rng.uniform(0.5, 1.0) / spectral_norm(P))
            gens.append(contraction_scale(P))
        return Representation(tuple(gens), label)

    # column-contraction: scale the stacked column [B_1; ...; B_n] into the unit ball
    column = np.vstack(polys)
    factor = rng.uniform(0.5, 1.0) / spectral_norm(column)
    polys = [P * factor for P in polys]
    column_norm = spectral_norm(np.vstack(polys))
    polys = [P / max(1.0, column_norm * (1 + SCALE_MARGIN)) for P in polys]
    return Representation(tuple(polys), label)


def _kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1)
    for F in factors:
        out = np.kron(out, F)
    return out
