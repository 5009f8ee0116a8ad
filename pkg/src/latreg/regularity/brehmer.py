"""Brehmer operators ``Z_U`` and the triangular factorization ``X_n = R_n^* R_n``.

Subsets of ``{1, ..., n}`` are bitmasks (bit ``i-1`` set iff ``i`` is in the
subset).  ``subset_order(n)`` fixes the block order used by
``factorize_brehmer``: larger subsets first, and among equal sizes the larger
bitmask first, so for ``n = 2`` the order is ``{1,2}, {2}, {1}, {}``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import ContractError, StructuralError
from ..positivity import DEFAULT_TOL, HermitianBlockMatrix, is_psd, psd_sqrt
from ..report import Report, elapsed_ms
from ..representation import Representation, evaluate, evaluate_tilde, spectral_norm

MAX_BREHMER_N = 12
IDENTITY_TOL = 1e-10
FACTOR_TOL = 1e-9


@dataclass(frozen=True)
class BrehmerIndex:
    """A subset ``U`` of ``{1, ..., n}`` stored as a bitmask."""

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.mask < 0 or self.mask >> self.n:
            raise StructuralError(f"mask {self.mask:b} is not a subset of {{1..{self.n}}}")

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "BrehmerIndex":
        mask = 0
        for i in indices:
            if not 1 <= i <= n:
                raise StructuralError(f"index {i} outside 1..{n}")
            mask |= 1 << (i - 1)
        return cls(mask, n)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    @property
    def vector(self) -> tuple[int, ...]:
        """The 0/1 vector ``e_U``."""
        return tuple(self.mask >> i & 1 for i in range(self.n))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


def subset_order(n: int) -> list[int]:
    """Bitmasks of all subsets of ``{1..n}`` in the published block order."""
    return sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m), reverse=True)


def _mask_of(U, n: int) -> int:
    if isinstance(U, BrehmerIndex):
        if U.n > n:
            raise StructuralError(f"{U!r} indexes {U.n} generators, representation has {n}")
        return U.mask
    if isinstance(U, int):
        return BrehmerIndex(U, n).mask
    return BrehmerIndex.from_indices(U, n).mask


def _vec(mask: int, n: int) -> tuple[int, ...]:
    return tuple(mask >> i & 1 for i in range(n))


def _submasks(mask: int) -> Iterable[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def brehmer_operator(rep: Representation, U) -> np.ndarray:
    """``Z_U = sum_{V subset U} (-1)^|V| T(e_V)^* T(e_V)``, computed term by term."""
    mask = _mask_of(U, rep.n)
    Z = np.zeros((rep.d, rep.d), dtype=complex)
    for sub in _submasks(mask):
        T = evaluate(rep, _vec(sub, rep.n))
        sign = -1 if bin(sub).count("1") % 2 else 1
        Z += sign * (T.conj().T @ T)
    return Z


def _all_brehmer(rep: Representation, n: int) -> dict[int, np.ndarray]:
    return {mask: brehmer_operator(rep, mask) for mask in range(1 << n)}


def recursion_defect(rep: Representation, Z: dict[int, np.ndarray], n: int) -> float:
    """Worst ``||Z_J - T_w^* Z_J T_w - Z_{J + w}||`` over ``J`` and ``w`` not in ``J``."""
    worst = 0.0
    for mask in range(1 << n):
        for w in range(n):
            if mask >> w & 1:
                continue
            Tw = rep.gens[w]
            lhs = Z[mask] - Tw.conj().T @ Z[mask] @ Tw
            worst = max(worst, spectral_norm(lhs - Z[mask | 1 << w]))
    return worst


def telescoping_defect(rep: Representation, Z: dict[int, np.ndarray], n: int) -> float:
    """Worst ``||sum_{U subset F} T_U^* Z_{F-U} T_U - I||`` over ``F``."""
    identity = np.eye(rep.d)
    worst = 0.0
    for F in range(1 << n):
        total = np.zeros((rep.d, rep.d), dtype=complex)
        for U in _submasks(F):
            TU = evaluate(rep, _vec(U, rep.n))
            total += TU.conj().T @ Z[F & ~U] @ TU
        worst = max(worst, spectral_norm(total - identity))
    return worst


def check_brehmer(rep: Representation, tol: float = DEFAULT_TOL) -> Report:
    """Check ``Z_U >= 0`` for every ``U`` and the one-step recursion identity.

    ``verdict`` reflects positivity only; the identity defect (which holds
    for every commuting tuple) is reported in ``details`` and its tolerance
    check in ``details["recursion_ok"]``.
    """
    if rep.n > MAX_BREHMER_N:
        raise ContractError(f"n={rep.n} exceeds the subset enumeration limit {MAX_BREHMER_N}")
    start = time.perf_counter()
    n = rep.n
    Z = _all_brehmer(rep, n)
    worst, witness, ok = np.inf, None, True
    for mask in subset_order(n)[::-1]:
        v = is_psd(Z[mask], tol)
        ok = ok and v.ok
        if v.lambda_min < worst:
            worst = v.lambda_min
            witness = list(BrehmerIndex(mask, n).indices)
    rec = recursion_defect(rep, Z, n)
    return Report(
        check="brehmer",
        verdict=ok,
        lambda_min=float(worst),
        witness=None if ok else witness,
        tolerances={"psd": tol, "identity": IDENTITY_TOL},
        runtime_ms=elapsed_ms(start),
        details={"recursion_defect": rec, "recursion_ok": rec <= IDENTITY_TOL,
                 "worst_subset": witness},
    )


@dataclass
class BrehmerFactorization:
    """``R`` and ``X`` as ``(2^n, 2^n, d, d)`` block arrays in ``order``."""

    order: list[int]
    n: int
    R: np.ndarray
    X: HermitianBlockMatrix
    residual: float
    telescoping_defect: float

    def dense_R(self) -> np.ndarray:
        N, _, d, _ = self.R.shape
        return self.R.transpose(0, 2, 1, 3).reshape(N * d, N * d)

    @property
    def labels(self) -> list[tuple[int, ...]]:
        return [BrehmerIndex(m, self.n).indices for m in self.order]

    def triangularity(self) -> str:
        """``"upper"``, ``"lower"``, ``"diagonal"`` or ``"none"`` at block level."""
        nz = np.array([[np.any(self.R[i, j] != 0) for j in range(len(self.order))]
                       for i in range(len(self.order))])
        upper = not np.any(np.tril(nz, -1))
        lower = not np.any(np.triu(nz, 1))
        if upper and lower:
            return "diagonal"
        return "upper" if upper else "lower" if lower else "none"


def factorize_brehmer(rep: Representation, n: int | None = None) -> BrehmerFactorization:
    """Build ``X_n = [T~(p_U - p_V)]`` and ``R_n(U, V) = Z_{J-U}^½ T_{U-V}`` (``V`` in ``U``).

    Uses the first ``n`` generators (all of them by default).  Requires every
    ``Z_J`` with ``J`` in ``{1..n}`` to be PSD and raises ``ContractError``
    naming the first violating ``J`` otherwise.  Also raises if
    ``||R^*R - X|| > 1e-9 max(1, ||X||)``.
    """
    n = rep.n if n is None else n
    if not 0 <= n <= min(rep.n, MAX_BREHMER_N):
        raise StructuralError(f"n={n} out of range for a representation with {rep.n} generators")
    d = rep.d
    full = (1 << n) - 1
    Z = _all_brehmer(rep, n)
    for mask in sorted(Z, key=lambda m: (bin(m).count("1"), m)):
        v = is_psd(Z[mask])
        if not v:
            J = BrehmerIndex(mask, n)
            raise ContractError(f"Z_{J!r} is not PSD (lambda_min = {v.lambda_min:.3e})",
                                witness=list(J.indices), lambda_min=v.lambda_min)
    roots = {mask: psd_sqrt(Z[mask]) for mask in Z}
    pad = (0,) * (rep.n - n)

    order = subset_order(n)
    N = len(order)
    R = np.zeros((N, N, d, d), dtype=complex)
    Xb = np.empty((N, N, d, d), dtype=complex)
    for (a, U), (b, V) in itertools.product(enumerate(order), repeat=2):
        diff = tuple(x - y for x, y in zip(_vec(U, n), _vec(V, n))) + pad
        Xb[a, b] = evaluate_tilde(rep, diff).matrix
        if V & ~U == 0:
            R[a, b] = roots[full & ~U] @ evaluate(rep, _vec(U & ~V, n) + pad)
    X = HermitianBlockMatrix(Xb, check=False)
    fact = BrehmerFactorization(order, n, R, X, 0.0, telescoping_defect(rep, Z, n))
    Rd, Xd = fact.dense_R(), X.dense()
    fact.residual = spectral_norm(Rd.conj().T @ Rd - Xd)
    if fact.residual > FACTOR_TOL * max(1.0, spectral_norm(Xd)):
        raise ContractError(f"R^*R differs from X_n by {fact.residual:.3e}")
    return fact
