"""Executable reduction of a window's positivity to star-condition checks.

``certify_regularity`` replays the induction behind the regularity criterion
on a concrete tuple:

* the global meet is divided out (the window does not change);
* if the entries are pairwise disjoint, the window is a corner of the
  doubling chain ``Q_0 = (e)``, ``Q_m = (Q_{m-1} + p_m, Q_{m-1})`` and each
  doubling is justified by one star check ``(Q_{m-1}, p_m)``;
* otherwise, with ``m`` the largest size of a subset with nontrivial meet, a
  size-``m`` subset ``J`` with meet ``g`` is divided by ``g``; the window of
  ``t`` is PSD once the reduced window is PSD and the star condition holds
  for ``g`` on the entries outside ``J``.  The complementary sub-window is
  certified as well.

Leaves are star checks (``T(g)^* X T(g) <= X`` blockwise), so a passing
certificate implies a PSD window, and a non-PSD window always produces a
failing leaf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator

from ..errors import ContractError
from ..positivity import DEFAULT_TOL
from ..representation import Representation
from .windows import ConeTuple, check_condition_star, double_tuple, reduce_step

DEFAULT_ENTRY_SUM_BOUND = 64
DEFAULT_DEPTH_LIMIT = 64

STAR_LEAF = "base-star-leaf"
MEET_DIVIDE = "meet-divide"
DOUBLING = "doubling"
TRIVIAL = "trivial"
UNVERIFIED = "unverified"


@dataclass
class CertificateNode:
    tuple: ConeTuple
    action: str
    params: dict[str, Any] = field(default_factory=dict)
    children: list["CertificateNode"] = field(default_factory=list)
    # True / False, or None when a depth limit left part of the tree unverified.
    verdict: bool | None = True
    lambda_min: float | None = None

    def walk(self) -> Iterator["CertificateNode"]:
        seen: set[int] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["CertificateNode"]:
        return [n for n in self.walk() if n.action == STAR_LEAF]

    def failing_leaves(self) -> list["CertificateNode"]:
        return [n for n in self.leaves() if n.verdict is False]

    @property
    def passed(self) -> bool:
        return self.verdict is True

    def to_json_obj(self) -> dict:
        out: dict[str, Any] = {
            "tuple": self.tuple.to_json_obj(),
            "action": self.action,
            "verdict": self.verdict,
        }
        if self.params:
            out["params"] = {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        if self.lambda_min is not None:
            out["lambda_min"] = self.lambda_min
        if self.children:
            out["children"] = [c.to_json_obj() for c in self.children]
        return out


def _combine(children: list[CertificateNode]) -> bool | None:
    verdicts = [c.verdict for c in children]
    if any(v is False for v in verdicts):
        return False
    if any(v is None for v in verdicts):
        return None
    return True


def _zero(n: int) -> tuple[int, ...]:
    return (0,) * n


def _meet(vectors) -> tuple[int, ...]:
    return tuple(min(col) for col in zip(*vectors))


def _largest_nontrivial_size(t: ConeTuple) -> int:
    """Smallest ``m`` such that every subset larger than ``m`` has trivial meet."""
    for size in range(len(t), 1, -1):
        for J in itertools.combinations(range(len(t)), size):
            if any(_meet(t[j] for j in J)):
                return size
    return 1


class _Certifier:
    def __init__(self, rep: Representation, tol: float, depth_limit: int):
        self.rep = rep
        self.tol = tol
        self.depth_limit = depth_limit
        self.memo: dict[tuple, CertificateNode] = {}
        self.star_memo: dict[tuple, CertificateNode] = {}

    def star_leaf(self, t: ConeTuple, g: tuple[int, ...]) -> CertificateNode:
        key = (tuple(sorted(t.elems)), g)
        if key not in self.star_memo:
            v = check_condition_star(self.rep, t, g, self.tol)
            self.star_memo[key] = CertificateNode(
                t, STAR_LEAF, {"g": g}, verdict=v.ok, lambda_min=v.lambda_min
            )
        return self.star_memo[key]

    def certify(self, t: ConeTuple, depth: int) -> CertificateNode:
        key = tuple(sorted(t.elems))
        if key in self.memo:
            return self.memo[key]
        node = self._certify(t, depth)
        if node.verdict is not None:
            self.memo[key] = node
        return node

    def _certify(self, t: ConeTuple, depth: int) -> CertificateNode:
        if depth > self.depth_limit:
            return CertificateNode(t, UNVERIFIED, verdict=None)
        n = t.n
        if len(t) == 1:
            return CertificateNode(t, TRIVIAL)

        g = _meet(t.elems)
        if any(g):
            _, reduced = reduce_step(t, range(len(t)))
            child = self.certify(reduced, depth + 1)
            return CertificateNode(t, MEET_DIVIDE, {"J": tuple(range(len(t))), "g": g},
                                   [child], _combine([child]))

        m = _largest_nontrivial_size(t)
        if m == 1:
            return self._doubling_chain(t)

        # Largest meets first; ties broken by the index set for reproducibility.
        candidates = []
        for J in itertools.combinations(range(len(t)), m):
            meet = _meet(t[j] for j in J)
            if any(meet):
                candidates.append((-sum(meet), J))
        _, J = min(candidates)
        gJ, reduced = reduce_step(t, J)
        rest = ConeTuple.of(t[j] for j in range(len(t)) if j not in J)
        children = [
            self.certify(reduced, depth + 1),
            self.certify(rest, depth + 1),
            self.star_leaf(rest, gJ),
        ]
        return CertificateNode(t, MEET_DIVIDE, {"J": J, "g": gJ}, children, _combine(children))

    def _doubling_chain(self, t: ConeTuple) -> CertificateNode:
        zero = _zero(t.n)
        gens = []
        for p in t:
            if any(p) and p not in gens:
                gens.append(p)
        window = ConeTuple((zero,))
        steps = []
        for p in gens:
            steps.append(self.star_leaf(window, p))
            window = double_tuple(window, p)
        return CertificateNode(t, DOUBLING, {"generators": gens, "final_size": len(window)},
                               steps, _combine(steps) if steps else True)


def certify_regularity(rep: Representation, t, depth_limit: int = DEFAULT_DEPTH_LIMIT,
                       tol: float = DEFAULT_TOL,
                       entry_sum_bound: int = DEFAULT_ENTRY_SUM_BOUND) -> CertificateNode:
    """Build the reduction certificate for the window of ``t``.

    The returned root's ``verdict`` is ``True`` when every star leaf passes
    (which implies the window is PSD), ``False`` when some leaf fails, and
    ``None`` when the depth limit cut a branch (marked ``"unverified"``).
    """
    t = ConeTuple.of(t)
    total = sum(sum(p) for p in t)
    if total > entry_sum_bound:
        raise ContractError(f"tuple coordinate sum {total} exceeds the bound {entry_sum_bound}")
    return _Certifier(rep, tol, depth_limit).certify(t, 0)
