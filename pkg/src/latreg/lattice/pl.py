"""Exact arithmetic on piecewise linear bijections of the rational line.

An element is stored as a tuple of breakpoints ``((x0, y0), ..., (xk, yk))``
with exact rational coordinates (``gmpy2.mpq``).  The map is the identity left of ``x0`` and
right of ``xk`` and linear in between consecutive breakpoints.  The canonical
form has strictly increasing ``x`` and ``y``, its first and last breakpoints
on the diagonal, and no breakpoint at which the slope does not change.  The
identity is the empty tuple.

Composition follows the usual convention ``(f * g)(t) = f(g(t))``.  The order
is pointwise: ``f <= g`` iff ``f(t) <= g(t)`` for all ``t``, so meets and joins
are pointwise minima and maxima.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Sequence

from gmpy2 import mpq as Q

from ..errors import ContractError

Point = tuple[Q, Q]
Breakpoints = tuple[Point, ...]

IDENTITY: Breakpoints = ()


def _slope(a: Point, b: Point) -> Q:
    return (b[1] - a[1]) / (b[0] - a[0])


def canonicalize(points: Iterable[tuple]) -> Breakpoints:
    """Sort, validate and strip redundant breakpoints.

    Raises ``ContractError`` if the points do not describe an increasing
    bijection that is the identity outside its breakpoint span.
    """
    pts = sorted((Q(x), Q(y)) for x, y in points)
    dedup: list[Point] = []
    for p in pts:
        if dedup and dedup[-1][0] == p[0]:
            if dedup[-1][1] != p[1]:
                raise ContractError(f"two values at x={p[0]}")
            continue
        dedup.append(p)
    if not dedup:
        return IDENTITY
    if dedup[0][0] != dedup[0][1] or dedup[-1][0] != dedup[-1][1]:
        raise ContractError("end breakpoints must lie on the diagonal")
    for a, b in zip(dedup, dedup[1:]):
        if b[1] <= a[1]:
            raise ContractError("breakpoints must be strictly increasing")

    # Sentinels on the diagonal encode the identity tails.
    first, last = dedup[0][0], dedup[-1][0]
    work = [(first - 1, first - 1)] + dedup + [(last + 1, last + 1)]
    stack: list[Point] = []
    for p in work:
        while len(stack) >= 2 and _slope(stack[-2], stack[-1]) == _slope(stack[-1], p):
            stack.pop()
        stack.append(p)
    return tuple(stack[1:-1])


def evaluate(f: Breakpoints, t: Q) -> Q:
    if not f or t <= f[0][0] or t >= f[-1][0]:
        return t
    i = bisect_right(f, t, key=lambda p: p[0]) - 1
    (x0, y0), (x1, y1) = f[i], f[i + 1]
    return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def inverse(f: Breakpoints) -> Breakpoints:
    return tuple((y, x) for x, y in f)


def compose(f: Breakpoints, g: Breakpoints) -> Breakpoints:
    """Return ``f o g`` (apply ``g`` first)."""
    if not f:
        return g
    if not g:
        return f
    ginv = inverse(g)
    xs = {x for x, _ in g}
    xs.update(evaluate(ginv, x) for x, _ in f)
    return canonicalize((x, evaluate(f, evaluate(g, x))) for x in xs)


def _pointwise(f: Breakpoints, g: Breakpoints, pick) -> Breakpoints:
    xs = sorted({x for x, _ in f} | {x for x, _ in g})
    if not xs:
        return IDENTITY
    candidates = list(xs)
    # Both maps are affine between consecutive candidates; add exact crossings.
    for a, b in zip(xs, xs[1:]):
        da = evaluate(f, a) - evaluate(g, a)
        db = evaluate(f, b) - evaluate(g, b)
        if da * db < 0:
            candidates.append(a + (b - a) * da / (da - db))
    return canonicalize((x, pick(evaluate(f, x), evaluate(g, x))) for x in candidates)


def meet(f: Breakpoints, g: Breakpoints) -> Breakpoints:
    return _pointwise(f, g, min)


def join(f: Breakpoints, g: Breakpoints) -> Breakpoints:
    return _pointwise(f, g, max)


def leq(f: Breakpoints, g: Breakpoints) -> bool:
    return meet(f, g) == f


def is_positive(f: Breakpoints) -> bool:
    # Affine between breakpoints, so checking the breakpoints suffices.
    return all(y >= x for x, y in f)


def sample_points(f: Breakpoints, g: Breakpoints = IDENTITY) -> list[Q]:
    """Breakpoints of both maps plus midpoints and points just outside."""
    xs = sorted({x for x, _ in f} | {x for x, _ in g})
    if not xs:
        return [Q(0)]
    pts = [xs[0] - 1, xs[-1] + 1] + xs
    pts += [(a + b) / 2 for a, b in zip(xs, xs[1:])]
    return sorted(pts)


def tent(a, peak, b, height) -> Breakpoints:
    """Map fixing everything outside ``[a, b]`` and sending ``peak`` to ``peak + height``."""
    a, peak, b, height = (Q(v) for v in (a, peak, b, height))
    if not a < peak < b or not a < peak + height < b:
        raise ContractError("tent must satisfy a < peak, peak + height < b")
    return canonicalize([(a, a), (peak, peak + height), (b, b)])


def to_json_list(f: Breakpoints) -> list[list[int]]:
    return [[int(x.numerator), int(x.denominator), int(y.numerator), int(y.denominator)] for x, y in f]


def from_json_list(bp: Sequence[Sequence[int]]) -> Breakpoints:
    return canonicalize((Q(xn, xd), Q(yn, yd)) for xn, xd, yn, yd in bp)
