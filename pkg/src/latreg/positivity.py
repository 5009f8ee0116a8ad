"""Hermitian and PSD primitives: Loewner comparisons, square roots, Gram factors.

All eigenvalue verdicts use one relative policy: a Hermitian ``H`` passes when
``lambda_min(H) >= -tol * max(1, max|lambda(H)|)``.  The raw ``lambda_min`` is
always returned alongside the verdict so callers can re-judge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, NumericError, StructuralError

DEFAULT_TOL = 1e-9
ASYMMETRY_TOL = 1e-8
PINV_RCOND = 1e-12
SQRT_NEGATIVE_TOL = 1e-6
DOUGLAS_RESIDUAL_TOL = 1e-9


class HermitianBlockMatrix:
    """An ``n x n`` array of ``d x d`` blocks, Hermitian as a whole.

    ``blocks`` has shape ``(n, n, d, d)``; the dense form is laid out with
    block rows major, i.e. entry ``(i*d + a, j*d + b)`` is ``blocks[i, j, a, b]``.
    """

    def __init__(self, blocks: np.ndarray, check: bool = True):
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.ndim != 4 or blocks.shape[0] != blocks.shape[1] or blocks.shape[2] != blocks.shape[3]:
            raise StructuralError(f"expected shape (n, n, d, d), got {blocks.shape}")
        self.blocks = blocks
        if check:
            dense = self.dense()
            _asymmetry_check(dense)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[2]

    def __getitem__(self, ij) -> np.ndarray:
        return self.blocks[ij]

    def dense(self) -> np.ndarray:
        n, d = self.n, self.d
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)

    @classmethod
    def from_dense(cls, H: np.ndarray, d: int) -> "HermitianBlockMatrix":
        H = np.asarray(H, dtype=complex)
        n = H.shape[0] // d
        if n * d != H.shape[0] or H.shape[0] != H.shape[1]:
            raise StructuralError(f"cannot split a {H.shape} matrix into {d}x{d} blocks")
        return cls(H.reshape(n, d, n, d).transpose(0, 2, 1, 3))

    @classmethod
    def from_blocks(cls, rows: Sequence[Sequence[np.ndarray]]) -> "HermitianBlockMatrix":
        return cls(np.array([[np.asarray(b, dtype=complex) for b in row] for row in rows]))

    def __repr__(self) -> str:
        return f"HermitianBlockMatrix(n={self.n}, d={self.d})"


def block_diag_repeat(M: np.ndarray, copies: int) -> np.ndarray:
    """``diag(M, M, ..., M)`` as a dense matrix."""
    return np.kron(np.eye(copies), M)


def _as_dense(H) -> np.ndarray:
    if isinstance(H, HermitianBlockMatrix):
        return H.dense()
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if H.shape[0] != H.shape[1]:
        raise StructuralError(f"expected a square matrix, got {H.shape}")
    return H


def _asymmetry_check(H: np.ndarray) -> None:
    if H.size == 0:
        return
    scale = max(1.0, float(np.max(np.abs(H))))
    asym = float(np.max(np.abs(H - H.conj().T)))
    if asym > ASYMMETRY_TOL * scale:
        raise NumericError(f"matrix is not Hermitian: asymmetry {asym:.3e} (scale {scale:.3e})")


def hermitian_part(H) -> np.ndarray:
    """Return ``(H + H*)/2`` after checking the asymmetry is only rounding."""
    H = _as_dense(H)
    _asymmetry_check(H)
    return (H + H.conj().T) / 2


def _eigvalsh(H: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(H) if np.all(np.isfinite(H)) else float("nan")
        raise NumericError(f"eigensolver failed ({exc}); condition number {cond:.3e}") from exc


@dataclass(frozen=True)
class PsdVerdict:
    """Result of a PSD test; truthy when the test passed."""

    ok: bool
    lambda_min: float
    scale: float
    tol: float

    def __bool__(self) -> bool:
        return self.ok


def is_psd(H, tol: float = DEFAULT_TOL) -> PsdVerdict:
    H = hermitian_part(H)
    if H.size == 0:
        return PsdVerdict(True, 0.0, 1.0, tol)
    w = _eigvalsh(H)
    scale = max(1.0, float(np.max(np.abs(w))))
    lam = float(w[0])
    return PsdVerdict(lam >= -tol * scale, lam, scale, tol)


def loewner_leq(A, B, tol: float = DEFAULT_TOL) -> PsdVerdict:
    """Test ``A <= B`` in the Loewner order."""
    A, B = _as_dense(A), _as_dense(B)
    if A.shape != B.shape:
        raise StructuralError(f"shape mismatch {A.shape} vs {B.shape}")
    return is_psd(B - A, tol)


def _psd_eigh(H) -> tuple[np.ndarray, np.ndarray]:
    H = hermitian_part(H)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed ({exc})") from exc
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if w.size and w[0] < -SQRT_NEGATIVE_TOL * scale:
        raise ContractError(f"matrix is not PSD: lambda_min = {w[0]:.3e}")
    return np.clip(w, 0.0, None), V


def psd_sqrt(H) -> np.ndarray:
    """Principal square root of a PSD matrix, clamping rounding-level negatives."""
    w, V = _psd_eigh(H)
    return (V * np.sqrt(w)) @ V.conj().T


def pivoted_cholesky(H, rel_tol: float = 1e-13) -> tuple[np.ndarray, np.ndarray]:
    """Rank-revealing Cholesky ``H[piv][:, piv] ~= L @ L^*``.

    Pivots on the largest remaining diagonal entry (first index on ties) and
    stops once it falls below ``rel_tol`` times the largest initial diagonal.
    Returns ``(L, piv)`` with ``L`` of shape ``(N, rank)``.
    """
    A = hermitian_part(H).copy()
    N = A.shape[0]
    piv = np.arange(N)
    if N == 0:
        return np.zeros((0, 0), dtype=complex), piv
    top = max(float(np.max(A.diagonal().real)), 0.0)
    stop = rel_tol * max(1.0, top)
    rank = 0
    for i in range(N):
        diag = A.diagonal().real[i:]
        j = i + int(np.argmax(diag))
        if diag[j - i] <= stop:
            break
        if j != i:
            A[:, [i, j]] = A[:, [j, i]]
            A[[i, j], :] = A[[j, i], :]
            piv[[i, j]] = piv[[j, i]]
        A[i, i] = np.sqrt(A[i, i].real)
        A[i + 1:, i] /= A[i, i]
        A[i + 1:, i + 1:] -= np.outer(A[i + 1:, i], A[i + 1:, i].conj())
        rank += 1
    L = np.tril(A)[:, :rank]
    return L, piv


def gram_factor(H, method: str = "cholesky") -> np.ndarray:
    """Return ``F`` with ``F^* F = H``; ``F`` has ``rank(H)`` rows.

    ``method="cholesky"`` uses pivoted Cholesky (upper triangular up to the
    column permutation); ``method="eigh"`` uses the clamped eigendecomposition.
    """
    Hd = _as_dense(H)
    verdict = is_psd(Hd, SQRT_NEGATIVE_TOL)
    if not verdict:
        raise ContractError(f"matrix is not PSD: lambda_min = {verdict.lambda_min:.3e}")
    if method == "cholesky":
        L, piv = pivoted_cholesky(Hd)
        F = np.zeros((L.shape[1], Hd.shape[0]), dtype=complex)
        F[:, piv] = L.conj().T
        return F
    if method == "eigh":
        w, V = _psd_eigh(Hd)
        keep = w > 1e-13 * max(1.0, float(w.max(initial=0.0)))
        return (V[:, keep] * np.sqrt(w[keep])).conj().T
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class DouglasFactor:
    C: np.ndarray
    norm: float
    residual: float


def douglas_solve(A, B, rcond: float = PINV_RCOND) -> DouglasFactor:
    """Solve ``A = C B`` for ``C`` via the pseudoinverse of ``B``.

    ``C = A B^+`` is the minimal-norm solution.  It is a contraction exactly
    when ``A^* A <= B^* B``.  Raises ``ContractError`` if ``A`` does not lie
    in the row space of ``B``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    if A.shape[1] != B.shape[1]:
        raise StructuralError(f"column counts differ: {A.shape} vs {B.shape}")
    C = A @ np.linalg.pinv(B, rcond=rcond)
    residual = float(np.linalg.norm(A - C @ B, 2)) if A.size else 0.0
    a_norm = float(np.linalg.norm(A, 2)) if A.size else 0.0
    if residual > DOUGLAS_RESIDUAL_TOL * max(1.0, a_norm):
        raise ContractError(f"A not in row-space of B (residual {residual:.3e})")
    c_norm = float(np.linalg.norm(C, 2)) if C.size else 0.0
    return DouglasFactor(C, c_norm, residual)


def block2x2_psd_check(A, X, D, tol: float = DEFAULT_TOL) -> tuple[PsdVerdict, PsdVerdict]:
    """Return the verdicts for ``[[A, A^½X], [X^*A^½, D]] >= 0`` and ``X^*X <= D``.

    The two agree whenever ``A`` is invertible, or more generally whenever
    the range of ``X`` lies in the closure of the range of ``A``.
    """
    A, D = _as_dense(A), _as_dense(D)
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    if X.shape != (A.shape[0], D.shape[0]):
        raise StructuralError(f"X must be {A.shape[0]}x{D.shape[0]}, got {X.shape}")
    root = psd_sqrt(A)
    off = root @ X
    M = np.block([[A, off], [off.conj().T, D]])
    return is_psd(M, tol), loewner_leq(X.conj().T @ X, D, tol)
