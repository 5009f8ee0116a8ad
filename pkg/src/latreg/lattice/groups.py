"""Concrete lattice ordered groups with exact arithmetic.

Four families are provided:

* ``ZnGroup(n)`` -- integer vectors, componentwise order.
* ``LexGroup(n)`` -- integer vectors, lexicographic (total) order.
* ``ProductGroup(factors)`` -- direct product, componentwise in the factors.
* ``PLGroup()`` -- increasing piecewise linear bijections of the rational
  line that are the identity outside a bounded interval (non-abelian).

Groups are immutable value objects; an ``Element`` carries its group and a
hashable payload whose shape the group understands.  Every binary operation
refuses elements of different groups with ``StructuralError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import ContractError, StructuralError
from . import pl


@dataclass(frozen=True)
class Element:
    group: "Group"
    value: Any

    def __mul__(self, other: "Element") -> "Element":
        return self.group.mul(self, other)

    def inv(self) -> "Element":
        return self.group.inv(self)

    def __and__(self, other: "Element") -> "Element":
        return self.group.meet(self, other)

    def __or__(self, other: "Element") -> "Element":
        return self.group.join(self, other)

    def __le__(self, other: "Element") -> bool:
        return self.group.leq(self, other)

    def __ge__(self, other: "Element") -> bool:
        return self.group.leq(other, self)

    def __lt__(self, other: "Element") -> bool:
        return self != other and self <= other

    def __gt__(self, other: "Element") -> bool:
        return self != other and self >= other

    @property
    def is_identity(self) -> bool:
        return self.value == self.group._identity()

    @property
    def is_positive(self) -> bool:
        return self.group._is_positive(self.value)

    def to_json_obj(self) -> dict:
        return self.group._to_json(self.value)

    def __repr__(self) -> str:
        return f"{self.group.kind}{self.group._format(self.value)}"


class Group:
    """Common interface; subclasses implement the ``_``-prefixed payload methods."""

    kind: str = "abstract"

    # -- public element-level API -------------------------------------------
    def element(self, value: Any) -> Element:
        return Element(self, self._coerce(value))

    def identity(self) -> Element:
        return Element(self, self._identity())

    def _check(self, *elems: Element) -> None:
        for x in elems:
            if not isinstance(x, Element) or x.group != self:
                other = getattr(x, "group", type(x).__name__)
                raise StructuralError(f"element of {other!r} used with {self!r}")

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return Element(self, self._mul(a.value, b.value))

    def inv(self, a: Element) -> Element:
        self._check(a)
        return Element(self, self._inv(a.value))

    def meet(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return Element(self, self._meet(a.value, b.value))

    def join(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return Element(self, self._join(a.value, b.value))

    def leq(self, a: Element, b: Element) -> bool:
        self._check(a, b)
        return self._leq(a.value, b.value)

    def sample(self, rng: np.random.Generator, positive: bool = False) -> Element:
        return Element(self, self._sample(rng, positive))

    def from_json(self, obj: dict) -> Element:
        return Element(self, self._from_json(obj))

    # -- payload-level defaults ---------------------------------------------
    def _leq(self, x, y) -> bool:
        return self._meet(x, y) == x

    def _is_positive(self, x) -> bool:
        return self._leq(self._identity(), x)

    def _format(self, x) -> str:
        return repr(x)


def _int_tuple(value, n: int) -> tuple[int, ...]:
    v = tuple(int(c) for c in value)
    if len(v) != n:
        raise StructuralError(f"expected length {n}, got {len(v)}")
    return v


@dataclass(frozen=True)
class ZnGroup(Group):
    """``Z^n`` with the componentwise order (positive cone ``Z_+^n``)."""

    n: int
    kind = "zn"

    def _coerce(self, value):
        return _int_tuple(value, self.n)

    def _identity(self):
        return (0,) * self.n

    def _mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def _inv(self, x):
        return tuple(-a for a in x)

    def _meet(self, x, y):
        return tuple(min(a, b) for a, b in zip(x, y))

    def _join(self, x, y):
        return tuple(max(a, b) for a, b in zip(x, y))

    def _leq(self, x, y):
        return all(a <= b for a, b in zip(x, y))

    def _sample(self, rng, positive):
        lo = 0 if positive else -3
        return tuple(int(c) for c in rng.integers(lo, 4, size=self.n))

    def _to_json(self, x):
        return {"kind": "zn", "v": list(x)}

    def _from_json(self, obj):
        if obj.get("kind") != "zn":
            raise StructuralError(f"expected kind 'zn', got {obj.get('kind')!r}")
        return self._coerce(obj["v"])


@dataclass(frozen=True)
class LexGroup(Group):
    """``Z^n`` totally ordered lexicographically.

    Python's tuple comparison is exactly the lexicographic order, so meet and
    join are ``min`` and ``max``.
    """

    n: int
    kind = "lex"

    _coerce = ZnGroup._coerce
    _identity = ZnGroup._identity
    _mul = ZnGroup._mul
    _inv = ZnGroup._inv

    def _meet(self, x, y):
        return min(x, y)

    def _join(self, x, y):
        return max(x, y)

    def _leq(self, x, y):
        return x <= y

    def _sample(self, rng, positive):
        v = tuple(int(c) for c in rng.integers(-3, 4, size=self.n))
        if positive and v < self._identity():
            v = self._inv(v)
        return v

    def _to_json(self, x):
        return {"kind": "lex", "v": list(x)}

    def _from_json(self, obj):
        if obj.get("kind") != "lex":
            raise StructuralError(f"expected kind 'lex', got {obj.get('kind')!r}")
        return self._coerce(obj["v"])


@dataclass(frozen=True)
class ProductGroup(Group):
    """Direct product of lattice ordered groups, ordered componentwise."""

    factors: tuple[Group, ...]
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ContractError("product needs at least one factor")

    def _coerce(self, value):
        value = tuple(value)
        if len(value) != len(self.factors):
            raise StructuralError("component count does not match the factors")
        out = []
        for g, v in zip(self.factors, value):
            if isinstance(v, Element):
                g._check(v)
                v = v.value
            else:
                v = g._coerce(v)
            out.append(v)
        return tuple(out)

    def _identity(self):
        return tuple(g._identity() for g in self.factors)

    def _mul(self, x, y):
        return tuple(g._mul(a, b) for g, a, b in zip(self.factors, x, y))

    def _inv(self, x):
        return tuple(g._inv(a) for g, a in zip(self.factors, x))

    def _meet(self, x, y):
        return tuple(g._meet(a, b) for g, a, b in zip(self.factors, x, y))

    def _join(self, x, y):
        return tuple(g._join(a, b) for g, a, b in zip(self.factors, x, y))

    def _leq(self, x, y):
        return all(g._leq(a, b) for g, a, b in zip(self.factors, x, y))

    def _sample(self, rng, positive):
        return tuple(g._sample(rng, positive) for g in self.factors)

    def _to_json(self, x):
        return {"kind": "product", "c": [g._to_json(a) for g, a in zip(self.factors, x)]}

    def _from_json(self, obj):
        if obj.get("kind") != "product":
            raise StructuralError(f"expected kind 'product', got {obj.get('kind')!r}")
        return tuple(g._from_json(c) for g, c in zip(self.factors, obj["c"]))

    def _format(self, x):
        return "(" + ", ".join(g._format(a) for g, a in zip(self.factors, x)) + ")"


# Grid the PL sampler draws tent parameters from: multiples of 1/2 in [-4, 4].
_PL_GRID_DEN = 2
_PL_GRID_MAX = 8


@dataclass(frozen=True)
class PLGroup(Group):
    """Increasing PL bijections of Q, compactly supported, composed as maps."""

    kind = "pl"

    def _coerce(self, value):
        if isinstance(value, dict):
            return self._from_json(value)
        return pl.canonicalize(value)

    def _identity(self):
        return pl.IDENTITY

    def _mul(self, x, y):
        return pl.compose(x, y)

    def _inv(self, x):
        return pl.inverse(x)

    def _meet(self, x, y):
        return pl.meet(x, y)

    def _join(self, x, y):
        return pl.join(x, y)

    def _leq(self, x, y):
        return pl.leq(x, y)

    def _is_positive(self, x):
        return pl.is_positive(x)

    def _random_tent(self, rng, sign: int):
        while True:
            a, peak, b = sorted(int(v) for v in rng.integers(-_PL_GRID_MAX, _PL_GRID_MAX + 1, size=3))
            if not a < peak < b:
                continue
            room = (b - peak) if sign > 0 else (peak - a)
            if room < 2:
                continue
            h = sign * int(rng.integers(1, room))
            d = _PL_GRID_DEN
            return pl.tent(pl.Q(a, d), pl.Q(peak, d), pl.Q(b, d), pl.Q(h, d))

    def _sample(self, rng, positive):
        """Compose one to four random tents; all of them raise if ``positive``."""
        f = pl.IDENTITY
        for _ in range(int(rng.integers(1, 5))):
            sign = 1 if positive or rng.random() < 0.5 else -1
            f = pl.compose(f, self._random_tent(rng, sign))
        return f

    def _to_json(self, x):
        return {"kind": "pl", "bp": pl.to_json_list(x)}

    def _from_json(self, obj):
        if obj.get("kind") != "pl":
            raise StructuralError(f"expected kind 'pl', got {obj.get('kind')!r}")
        return pl.from_json_list(obj["bp"])

    def _format(self, x):
        return "[" + ", ".join(f"({p}, {q})" for p, q in x) + "]"

    def __call__(self, f: Element, t) -> pl.Q:
        """Evaluate ``f`` at the rational point ``t``."""
        self._check(f)
        return pl.evaluate(f.value, pl.Q(t))


def group_from_spec(spec: dict) -> Group:
    """Build a group from ``{"kind": "zn", "n": 3}``-style descriptions."""
    kind = spec.get("kind")
    if kind == "zn":
        return ZnGroup(int(spec["n"]))
    if kind == "lex":
        return LexGroup(int(spec["n"]))
    if kind == "pl":
        return PLGroup()
    if kind == "product":
        return ProductGroup(tuple(group_from_spec(f) for f in spec["factors"]))
    raise ContractError(f"unknown group kind {kind!r}")


def group_to_spec(group: Group) -> dict:
    if isinstance(group, (ZnGroup, LexGroup)):
        return {"kind": group.kind, "n": group.n}
    if isinstance(group, PLGroup):
        return {"kind": "pl"}
    if isinstance(group, ProductGroup):
        return {"kind": "product", "factors": [group_to_spec(f) for f in group.factors]}
    raise StructuralError(f"cannot describe {group!r}")


def element_from_json(obj: dict, group: Group | None = None) -> Element:
    """Decode ``{"kind": "zn", "v": [...]}`` and friends.

    Without an explicit group, ``zn``/``lex`` lengths are taken from the data;
    products need their group.
    """
    if group is not None:
        return group.from_json(obj)
    kind = obj.get("kind")
    if kind == "zn":
        return ZnGroup(len(obj["v"])).from_json(obj)
    if kind == "lex":
        return LexGroup(len(obj["v"])).from_json(obj)
    if kind == "pl":
        return PLGroup().from_json(obj)
    raise StructuralError(f"cannot infer the group of a {kind!r} element")
