"""Gram windows ``[T~(p_i - p_j)]`` and the operations that transform them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ContractError, StructuralError
from ..lattice import Element, ZnGroup, meet_all
from ..positivity import (
    DEFAULT_TOL,
    HermitianBlockMatrix,
    PsdVerdict,
    block_diag_repeat,
    is_psd,
    loewner_leq,
)
from ..representation import Representation, coords, evaluate, evaluate_tilde


@dataclass(frozen=True)
class ConeTuple:
    """An ordered list of positive vectors ``p_1, ..., p_k``; repeats allowed."""

    elems: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        elems = tuple(coords(p) for p in self.elems)
        if not elems:
            raise ContractError("a cone tuple needs at least one element")
        if len({len(p) for p in elems}) != 1:
            raise StructuralError("cone tuple entries have different lengths")
        if any(c < 0 for p in elems for c in p):
            raise ContractError(f"cone tuple entries must be positive: {elems}")
        object.__setattr__(self, "elems", elems)

    @classmethod
    def of(cls, t) -> "ConeTuple":
        return t if isinstance(t, ConeTuple) else cls(tuple(t))

    @property
    def n(self) -> int:
        return len(self.elems[0])

    @property
    def group(self) -> ZnGroup:
        return ZnGroup(self.n)

    def elements(self) -> list[Element]:
        g = self.group
        return [g.element(p) for p in self.elems]

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __getitem__(self, i):
        return self.elems[i]

    def subtuple(self, indices: Iterable[int]) -> "ConeTuple":
        return ConeTuple(tuple(self.elems[i] for i in indices))

    def to_json_obj(self) -> list[list[int]]:
        return [list(p) for p in self.elems]


def build_tilde_gram(rep: Representation, t) -> HermitianBlockMatrix:
    """``X = [T~(p_i - p_j)]`` with row index ``i`` and column index ``j``."""
    t = ConeTuple.of(t)
    if t.n != rep.n:
        raise StructuralError(f"tuple has length-{t.n} entries, representation has n={rep.n}")
    k, d = len(t), rep.d
    blocks = np.empty((k, k, d, d), dtype=complex)
    cache: dict[tuple[int, ...], np.ndarray] = {}
    for i, p in enumerate(t):
        for j, q in enumerate(t):
            diff = tuple(a - b for a, b in zip(p, q))
            if diff not in cache:
                cache[diff] = evaluate_tilde(rep, diff).matrix
            blocks[i, j] = cache[diff]
    return HermitianBlockMatrix(blocks, check=False)


def _require_disjoint(t: ConeTuple, g) -> tuple[int, ...]:
    gv = coords(g)
    if len(gv) != t.n or any(c < 0 for c in gv):
        raise ContractError(f"g={gv} must be a positive vector of length {t.n}")
    grp = t.group
    e = grp.identity()
    for p in t.elements():
        if p & grp.element(gv) != e:
            raise ContractError(f"hypothesis g ^ p = e fails for g={gv}, p={p.value}")
    return gv


def check_condition_star(rep: Representation, t, g, tol: float = DEFAULT_TOL) -> PsdVerdict:
    """Test ``D^* X D <= X`` with ``X`` the window of ``t`` and ``D = diag(T(g))``.

    Only defined for positive ``g`` disjoint from every entry of ``t``;
    anything else raises ``ContractError``.
    """
    t = ConeTuple.of(t)
    gv = _require_disjoint(t, g)
    X = build_tilde_gram(rep, t).dense()
    D = block_diag_repeat(evaluate(rep, gv), len(t))
    return loewner_leq(D.conj().T @ X @ D, X, tol)


def double_tuple(t, g) -> ConeTuple:
    """``(p_1 + g, ..., p_k + g, p_1, ..., p_k)`` for ``g`` disjoint from every ``p_i``."""
    t = ConeTuple.of(t)
    gv = _require_disjoint(t, g)
    shifted = tuple(tuple(a + b for a, b in zip(p, gv)) for p in t)
    return ConeTuple(shifted + t.elems)


def reduce_step(t, J: Sequence[int]) -> tuple[tuple[int, ...], ConeTuple]:
    """Divide the entries indexed by ``J`` (0-based) by their common meet.

    Returns ``(g, t')`` where ``g`` is the meet of ``{p_j : j in J}`` and ``t'``
    has ``p_j - g`` in those positions; the meet over ``J`` of ``t'`` is ``e``.
    """
    t = ConeTuple.of(t)
    J = sorted(set(J))
    if not J:
        raise ContractError("J must be nonempty")
    if J[0] < 0 or J[-1] >= len(t):
        raise StructuralError(f"J={J} out of range for a tuple of length {len(t)}")
    elems = t.elements()
    g = meet_all(elems[j] for j in J)
    ginv = g.inv()
    new = [p * ginv if j in J else p for j, p in enumerate(elems)]
    return g.value, ConeTuple(tuple(p.value for p in new))


def window_verdict(rep: Representation, t, tol: float = DEFAULT_TOL) -> PsdVerdict:
    return is_psd(build_tilde_gram(rep, t), tol)
