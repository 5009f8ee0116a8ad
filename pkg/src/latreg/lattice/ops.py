"""Group operations, lattice operations and positive/negative parts."""

from __future__ import annotations

from functools import reduce
from typing import Iterable

from ..errors import ContractError, StructuralError
from .groups import Element


def group_op(a: Element, b: Element | None = None, kind: str = "multiply") -> Element:
    """Dispatch ``multiply`` (``a*b``), ``inverse`` (of ``a``) or ``identity``."""
    if kind == "multiply":
        if b is None:
            raise StructuralError("multiply needs two operands")
        return a.group.mul(a, b)
    if b is not None:
        a.group._check(b)
    if kind in ("inverse", "inverse-of-first"):
        return a.group.inv(a)
    if kind in ("identity", "identity-of-group"):
        return a.group.identity()
    raise ValueError(f"unknown group operation {kind!r}")


def meet_join(a: Element, b: Element) -> tuple[Element, Element]:
    """Return ``(a & b, a | b)``."""
    return a.group.meet(a, b), a.group.join(a, b)


def meet_all(elems: Iterable[Element]) -> Element:
    return reduce(lambda x, y: x & y, elems)


def join_all(elems: Iterable[Element]) -> Element:
    return reduce(lambda x, y: x | y, elems)


def pos_neg_parts(g: Element) -> tuple[Element, Element]:
    """Return ``(g_+, g_-)`` with ``g_+ = g | e`` and ``g_- = g^{-1} | e``.

    They satisfy ``g = g_+ * g_-^{-1}`` and ``g_+ & g_- = e``.
    """
    e = g.group.identity()
    return g | e, g.inv() | e


def quotient_parts(p: Element, q: Element) -> tuple[Element, Element]:
    """Positive and negative parts of ``p q^{-1}`` for positive ``p, q``.

    Computed as ``p (p & q)^{-1}`` and ``q (p & q)^{-1}``, which avoids forming
    ``p q^{-1}`` at all.
    """
    p.group._check(q)
    if not (p.is_positive and q.is_positive):
        raise ContractError("quotient_parts needs positive arguments")
    m = (p & q).inv()
    return p * m, q * m
