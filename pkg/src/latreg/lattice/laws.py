"""Randomised exact checks of the lattice ordered group identities.

Each law draws its own operands from the group's seeded sampler.  Laws with
hypotheses build operands that satisfy them by construction instead of
rejection sampling, e.g. a disjoint pair ``(g, q)`` comes from the positive
and negative parts of a random quotient.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ..report import Report, elapsed_ms
from .groups import Element, Group
from .ops import meet_all, pos_neg_parts, quotient_parts

Law = Callable[[Group, np.random.Generator], tuple[bool, dict]]


def _disjoint_pair(group: Group, rng) -> tuple[Element, Element]:
    """Two positive elements whose meet is the identity."""
    a = group.sample(rng, positive=True)
    b = group.sample(rng, positive=True)
    return quotient_parts(a, b)


def _law_distributive(group, rng):
    a, b, c = (group.sample(rng) for _ in range(3))
    ok = (
        a * (b | c) == (a * b) | (a * c)
        and (b | c) * a == (b * a) | (c * a)
        and a * (b & c) == (a * b) & (a * c)
        and (b & c) * a == (b * a) & (c * a)
    )
    return ok, {"a": a, "b": b, "c": c}


def _law_inverse_duality(group, rng):
    a, b = group.sample(rng), group.sample(rng)
    ok = (a & b).inv() == a.inv() | b.inv() and (a | b).inv() == a.inv() & b.inv()
    return ok, {"a": a, "b": b}


def _law_order_reversal(group, rng):
    a, c = group.sample(rng), group.sample(rng)
    b = a & c  # guarantees one comparable pair per trial
    ok = (a >= b) == (a.inv() <= b.inv()) and (a >= c) == (a.inv() <= c.inv())
    return ok, {"a": a, "b": b, "c": c}


def _law_meet_join_product(group, rng):
    a, b = group.sample(rng), group.sample(rng)
    ok = a * (a & b).inv() * b == a | b
    p, q = _disjoint_pair(group, rng)
    ok = ok and p * q == q * p == p | q
    return ok, {"a": a, "b": b, "p": p, "q": q}


def _law_meet_submultiplicative(group, rng):
    a, b, c = (group.sample(rng, positive=True) for _ in range(3))
    ok = a & (b * c) <= (a & b) * (a & c)
    return ok, {"a": a, "b": b, "c": c}


def _law_pos_neg(group, rng):
    g = group.sample(rng)
    gp, gm = pos_neg_parts(g)
    e = group.identity()
    ok = gp * gm.inv() == g and gp & gm == e and gp.is_positive and gm.is_positive
    return ok, {"g": g}


def _law_quotient_parts(group, rng):
    p, q = group.sample(rng, positive=True), group.sample(rng, positive=True)
    ok = quotient_parts(p, q) == pos_neg_parts(p * q.inv())
    return ok, {"p": p, "q": q}


def _law_meet_absorbs_disjoint(group, rng):
    g, q = _disjoint_pair(group, rng)
    p = group.sample(rng, positive=True)
    return (p * g) & q == p & q, {"p": p, "g": g, "q": q}


def _law_shifted_quotient(group, rng):
    g, q = _disjoint_pair(group, rng)
    p = group.sample(rng, positive=True)
    plus, minus = pos_neg_parts(p * q.inv())
    s_plus, s_minus = pos_neg_parts(p * g * q.inv())
    ok = s_plus == plus * g and s_minus == minus
    # Variant with g <= p: remove g from p instead of adding it.
    r = group.sample(rng, positive=True)
    p2 = r * g
    plus2, minus2 = pos_neg_parts(p2 * q.inv())
    t_plus, t_minus = pos_neg_parts(p2 * g.inv() * q.inv())
    ok = ok and g <= p2 and t_minus == minus2 and t_plus == plus2 * g.inv()
    return ok, {"p": p, "g": g, "q": q, "r": r}


def _law_meet_of_reduced(group, rng):
    k = int(rng.integers(2, 5))
    ps = [group.sample(rng, positive=True) for _ in range(k)]
    gs = [p & group.sample(rng, positive=True) for p in ps]
    reduced = [p * g.inv() for p, g in zip(ps, gs)]
    ok = meet_all(reduced) <= meet_all(ps)
    # With the meet normalised away, the reduced meet is exactly the identity.
    m = meet_all(ps).inv()
    normalized = [p * m for p in ps]
    hs = [p & group.sample(rng, positive=True) for p in normalized]
    e = group.identity()
    ok = ok and meet_all(normalized) == e
    ok = ok and meet_all(p * h.inv() for p, h in zip(normalized, hs)) == e
    return ok, {"ps": ps, "gs": gs}


LAWS: dict[str, Law] = {
    "distributive": _law_distributive,
    "inverse_duality": _law_inverse_duality,
    "order_reversal": _law_order_reversal,
    "meet_join_product": _law_meet_join_product,
    "meet_submultiplicative": _law_meet_submultiplicative,
    "pos_neg_decomposition": _law_pos_neg,
    "quotient_parts": _law_quotient_parts,
    "meet_absorbs_disjoint": _law_meet_absorbs_disjoint,
    "shifted_quotient": _law_shifted_quotient,
    "meet_of_reduced": _law_meet_of_reduced,
}


def law_suite(group: Group, seed: int = 0, trials: int = 1000, laws: list[str] | None = None) -> Report:
    """Run every law ``trials`` times on seeded samples from ``group``.

    Failures are not raised; they are counted and the first counterexample
    of each law is kept in ``details["counterexamples"]``.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    names = list(LAWS) if laws is None else laws
    counts = {name: {"passed": 0, "failed": 0} for name in names}
    counterexamples: dict[str, dict] = {}
    for _ in range(trials):
        for name in names:
            ok, witness = LAWS[name](group, rng)
            if ok:
                counts[name]["passed"] += 1
            else:
                counts[name]["failed"] += 1
                counterexamples.setdefault(name, witness)
    verdict = not counterexamples
    first = next(iter(counterexamples.items()), None)
    return Report(
        check="law-suite",
        verdict=verdict,
        witness=None if first is None else {"law": first[0], **first[1]},
        seed=seed,
        runtime_ms=elapsed_ms(start),
        details={"group": repr(group), "trials": trials, "laws": counts,
                 "counterexamples": counterexamples},
    )
