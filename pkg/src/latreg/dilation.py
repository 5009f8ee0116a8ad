"""Finite-window dilations and the covariance identity.

``window_dilation`` factors a PSD window ``X = [T~(p_i - p_j)]`` as Gram data
``X(i, j) = V_i^* V_j``.  ``finite_unitary_dilation`` builds a unitary whose
first ``N`` powers compress to the powers of one contraction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, StructuralError
from .positivity import gram_factor, is_psd
from .regularity.windows import ConeTuple, build_tilde_gram
from .report import Report, elapsed_ms
from .representation import CONTRACTION_TOL, Representation, evaluate, spectral_norm

COVARIANCE_TOL = 1e-10

# Block positions (row, column) in the (N+1) x (N+1) block matrix built by
# ``finite_unitary_dilation``.  Rows 2..N carry an identity on the subdiagonal.
UNITARY_LAYOUT = {
    "T": (0, 0),
    "defect_adjoint": (0, -1),   # D_{T*} = (I - T T^*)^½
    "defect": (1, 0),            # D_T = (I - T^* T)^½
    "minus_adjoint": (1, -1),    # -T^*
}


@dataclass
class WindowDilation:
    """Block columns ``V_1..V_k`` of shape ``r x d`` with ``V_i^* V_j = X(i, j)``."""

    tuple: ConeTuple
    blocks: list[np.ndarray]
    r: int

    def gram(self) -> np.ndarray:
        V = np.hstack(self.blocks) if self.blocks else np.zeros((self.r, 0))
        return V.conj().T @ V

    def to_json_obj(self) -> dict:
        return {
            "tuple": self.tuple.to_json_obj(),
            "r": self.r,
            "blocks": [[[[float(z.real), float(z.imag)] for z in row] for row in V]
                       for V in self.blocks],
        }


def window_dilation(rep: Representation, t, method: str = "cholesky") -> WindowDilation:
    """Gram vectors for the window of ``t``; raises ``ContractError`` if it is not PSD."""
    t = ConeTuple.of(t)
    X = build_tilde_gram(rep, t)
    v = is_psd(X)
    if not v:
        raise ContractError(f"window is not PSD (lambda_min = {v.lambda_min:.3e}) for tuple {t.elems}",
                            witness=t.elems, lambda_min=v.lambda_min)
    F = gram_factor(X, method=method)
    d = rep.d
    blocks = [F[:, i * d:(i + 1) * d] for i in range(len(t))]
    return WindowDilation(t, blocks, F.shape[0])


def defect_operators(T) -> tuple[np.ndarray, np.ndarray]:
    """``(D_T, D_{T*})`` from one SVD ``T = W S V^*``.

    ``D_T = V (1 - S^2)^½ V^*`` and ``D_{T*} = W (1 - S^2)^½ W^*``.  Sharing the
    singular vectors makes ``T^*T + D_T^2 = I`` and ``T^* D_{T*} = D_T T^*``
    hold to rounding even when ``||T|| = 1``, where separate square roots of
    ``I - T^*T`` and ``I - TT^*`` lose half the digits.
    """
    W, S, Vh = np.linalg.svd(T)
    root = np.sqrt(np.clip((1 - S) * (1 + S), 0.0, None))
    D = (Vh.conj().T * root) @ Vh
    D_adj = (W * root) @ W.conj().T
    return D, D_adj


def finite_unitary_dilation(T, N: int) -> np.ndarray:
    """Unitary ``U`` on ``C^(d(N+1))`` whose top-left block of ``U^k`` is ``T^k`` for ``k <= N``.

    Block layout follows ``UNITARY_LAYOUT``: the first two block rows hold
    ``[T, 0, ..., 0, D_{T*}]`` and ``[D_T, 0, ..., 0, -T^*]``, and each later
    block row ``k`` has ``I`` in column ``k - 1``.
    """
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    if T.shape[0] != T.shape[1]:
        raise StructuralError(f"T must be square, got {T.shape}")
    if N < 1:
        raise ContractError(f"horizon N must be at least 1, got {N}")
    if spectral_norm(T) > 1 + CONTRACTION_TOL:
        raise ContractError(f"T is not a contraction (norm {spectral_norm(T):.6g})")
    d = T.shape[0]
    I = np.eye(d)
    D, D_adj = defect_operators(T)
    parts = {"T": T, "defect_adjoint": D_adj, "defect": D, "minus_adjoint": -T.conj().T}
    size = N + 1
    U = np.zeros((size * d, size * d), dtype=complex)

    def put(r, c, M):
        r, c = r % size, c % size
        U[r * d:(r + 1) * d, c * d:(c + 1) * d] = M

    for name, (r, c) in UNITARY_LAYOUT.items():
        put(r, c, parts[name])
    for k in range(2, size):
        put(k, k - 1, I)
    return U


def unitarity_defect(U: np.ndarray) -> float:
    return spectral_norm(U.conj().T @ U - np.eye(U.shape[0]))


def compression_defect(U: np.ndarray, T: np.ndarray, N: int) -> float:
    """Worst ``||(U^k)_{00} - T^k||`` for ``1 <= k <= N``."""
    T = np.atleast_2d(np.asarray(T, dtype=complex))
    d = T.shape[0]
    worst = 0.0
    Uk, Tk = np.eye(U.shape[0]), np.eye(d)
    for _ in range(N):
        Uk, Tk = Uk @ U, Tk @ T
        worst = max(worst, spectral_norm(Uk[:d, :d] - Tk))
    return worst


AlphaMap = np.ndarray | Callable[[np.ndarray], np.ndarray]


def _apply(alpha: AlphaMap, coeffs: np.ndarray) -> np.ndarray:
    out = alpha(coeffs) if callable(alpha) else np.asarray(alpha) @ coeffs
    out = np.asarray(out, dtype=complex)
    if out.shape != coeffs.shape:
        raise StructuralError(f"alpha maps a length-{coeffs.size} vector to shape {out.shape}")
    return out


def alpha_power(alphas: Sequence[AlphaMap], s, coeffs: np.ndarray) -> np.ndarray:
    """``alpha_s(a)`` for ``s = sum s_i e_i``, applying each generator map ``s_i`` times."""
    out = np.asarray(coeffs, dtype=complex)
    for alpha, k in zip(alphas, s):
        for _ in range(int(k)):
            out = _apply(alpha, out)
    return out


def conjugation_alpha(pi_gens: Sequence[np.ndarray], rep: Representation) -> list[np.ndarray]:
    """Coefficient matrices of ``a -> T_i^* a T_i`` on the span of ``pi_gens``.

    Raises ``ContractError`` if some ``T_i^* a_l T_i`` leaves the span.
    """
    basis = np.array([np.asarray(a, dtype=complex).ravel() for a in pi_gens]).T
    out = []
    for Ti in rep.gens:
        images = np.array([(Ti.conj().T @ a @ Ti).ravel() for a in pi_gens]).T
        M, *_ = np.linalg.lstsq(basis, images, rcond=None)
        if spectral_norm(basis @ M - images) > COVARIANCE_TOL * max(1.0, spectral_norm(images)):
            raise ContractError("conjugation by a generator leaves the span of pi_gens")
        out.append(M)
    return out


def check_covariant_pair(pi_gens: Sequence[np.ndarray], alpha: Sequence[AlphaMap],
                         rep: Representation, samples: int = 50, seed: int = 0,
                         tol: float = COVARIANCE_TOL) -> Report:
    """Test ``pi(a) T(s) = T(s) pi(alpha_s(a))``.

    Algebra elements are coefficient vectors ``c`` with ``pi(a) = sum c_l pi_gens[l]``.
    ``alpha[i]`` is the action of ``e_i``, either a square coefficient matrix
    or a callable on coefficient vectors.  Every (basis element, generator)
    pair is checked, then ``samples`` random pairs with ``s`` entries up to 3.
    """
    start = time.perf_counter()
    pis = [np.asarray(a, dtype=complex) for a in pi_gens]
    if not pis:
        raise StructuralError("pi_gens is empty")
    if any(a.shape != (rep.d, rep.d) for a in pis):
        raise StructuralError(f"pi_gens must be {rep.d}x{rep.d} matrices")
    if len(alpha) != rep.n:
        raise StructuralError(f"expected {rep.n} alpha maps, got {len(alpha)}")
    k = len(pis)
    for A in alpha:
        if not callable(A) and np.shape(A) != (k, k):
            raise StructuralError(f"alpha matrices must be {k}x{k}, got {np.shape(A)}")

    def pi(c):
        return np.tensordot(c, np.array(pis), axes=1)

    rng = np.random.default_rng(seed)
    cases = []
    for l in range(k):
        for i in range(rep.n):
            cases.append((np.eye(k)[l].astype(complex), tuple(int(j == i) for j in range(rep.n))))
    for _ in range(samples):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        s = tuple(int(x) for x in rng.integers(0, 4, size=rep.n))
        cases.append((c, s))

    worst, witness, ok = 0.0, None, True
    for c, s in cases:
        Ts = evaluate(rep, s)
        lhs = pi(c) @ Ts
        rhs = Ts @ pi(alpha_power(alpha, s, c))
        defect = spectral_norm(lhs - rhs)
        scale = max(1.0, spectral_norm(pi(c)) * spectral_norm(Ts))
        if defect > tol * scale:
            ok = False
        if defect > worst:
            worst, witness = defect, {"a": c, "s": s}
    return Report(
        check="covariant-pair",
        verdict=ok,
        witness=None if ok else witness,
        tolerances={"covariance": tol},
        seed=seed,
        runtime_ms=elapsed_ms(start),
        details={"max_defect": worst, "pairs_checked": len(cases)},
    )
