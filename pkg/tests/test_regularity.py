import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latreg.errors import ContractError, StructuralError
from latreg.lattice import ZnGroup, meet_all
from latreg.positivity import is_psd
from latreg.regularity import (
    BrehmerIndex,
    ConeTuple,
    brehmer_operator,
    build_tilde_gram,
    certify_regularity,
    check_brehmer,
    check_condition_star,
    check_regular_sampled,
    double_tuple,
    factorize_brehmer,
    recursion_defect,
    reduce_step,
    subset_order,
    telescoping_defect,
    window_verdict,
)
from latreg.regularity.brehmer import _all_brehmer
from latreg.representation import JORDAN_BLOCK, Representation, evaluate, generate
from latreg.worked_examples import expected_r2_layout

from conftest import scalar_rep

T = JORDAN_BLOCK
Ts = T.conj().T
I2 = np.eye(2)
Z2 = np.zeros((2, 2))


def disjoint_instances(rng, n, count, max_entry=2, size_range=(1, 4)):
    """Random (tuple, g) pairs with g positive, nonzero and disjoint from every entry."""
    out = []
    while len(out) < count:
        support = rng.random(n) < 0.5
        if support.all() or not support.any():
            continue
        g = tuple(int(rng.integers(1, max_entry + 1)) if s else 0 for s in support)
        k = int(rng.integers(*size_range, endpoint=True))
        t = tuple(tuple(0 if s else int(rng.integers(0, max_entry + 1)) for s in support)
                  for _ in range(k))
        out.append((t, g))
    return out


# -- windows --------------------------------------------------------------------

def test_scalar_window():
    X = build_tilde_gram(scalar_rep(0.5), ((0,), (1,))).dense()
    assert np.allclose(X, [[1, 0.5], [0.5, 1]])


def test_singleton_window_is_identity():
    rep = generate("column-contraction", 2, 3, seed=2)
    assert np.array_equal(build_tilde_gram(rep, ((2, 1),)).dense(), np.eye(3))


def test_jordan_window_matches_displayed_layout(jordan):
    layout = np.block([
        [I2, T, T, T @ T],
        [Ts, I2, Ts @ T, T],
        [Ts, Ts @ T, I2, T],
        [Ts @ Ts, Ts, Ts, I2],
    ])
    X = build_tilde_gram(jordan, ((1, 1), (0, 1), (1, 0), (0, 0))).dense()
    assert np.array_equal(X, layout)
    perm = [3, 2, 1, 0]  # ((0,0),(1,0),(0,1),(1,1)) lists the same points in reverse
    Y = build_tilde_gram(jordan, ((0, 0), (1, 0), (0, 1), (1, 1))).blocks
    assert np.array_equal(Y, build_tilde_gram(jordan, ((1, 1), (0, 1), (1, 0), (0, 0))).blocks[np.ix_(perm, perm)])


def test_window_rejects_bad_tuples(jordan):
    with pytest.raises(ContractError):
        ConeTuple(((1, -1),))
    with pytest.raises(StructuralError):
        ConeTuple(((1, 0), (1,)))
    with pytest.raises(StructuralError):
        build_tilde_gram(jordan, ((1, 0, 0),))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1),
       st.lists(st.lists(st.integers(0, 2), min_size=2, max_size=2), min_size=1, max_size=4),
       st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_window_hermitian_and_translation_invariant(seed, t, s):
    rep = generate("commuting-polynomial", 2, 2, seed=seed)
    X = build_tilde_gram(rep, t)
    k = len(t)
    for i, j in itertools.product(range(k), repeat=2):
        assert np.abs(X[i, j] - X[j, i].conj().T).max() <= 1e-12
    shifted = [[a + b for a, b in zip(p, s)] for p in t]
    assert np.array_equal(build_tilde_gram(rep, shifted).blocks, X.blocks)


# -- the star condition ----------------------------------------------------------

def test_star_scalar_contraction():
    assert check_condition_star(scalar_rep(0.9j), ((0,),), (1,))
    assert check_condition_star(scalar_rep(1.0), ((0,),), (1,))


def test_star_jordan_single_point(jordan):
    v = check_condition_star(jordan, ((0, 0),), (1, 0))
    assert v.ok and v.lambda_min == pytest.approx(0.0)


def test_star_jordan_pinned_failure(jordan):
    v = check_condition_star(jordan, ((1, 0), (0, 0)), (0, 1))
    assert not v.ok
    assert v.lambda_min == pytest.approx((1 - np.sqrt(5)) / 2)


def test_star_failures_found_by_brute_force(jordan):
    grid = list(itertools.product(range(2), repeat=2))
    failing = []
    for size in (1, 2, 3):
        for t in itertools.combinations(grid, size):
            for g in grid:
                if not any(g) or any(min(a, b) for p in t for a, b in zip(p, g)):
                    continue
                if not check_condition_star(jordan, t, g):
                    failing.append((t, g))
    assert failing == [(((0, 0), (0, 1)), (1, 0)), (((0, 0), (1, 0)), (0, 1))]


def test_star_requires_disjoint_g(jordan):
    with pytest.raises(ContractError):
        check_condition_star(jordan, ((1, 0),), (1, 1))
    with pytest.raises(ContractError):
        check_condition_star(jordan, ((0, 0),), (-1, 0))


# -- doubling and reduction ------------------------------------------------------

def test_double_tuple_examples():
    assert double_tuple(((1, 0),), (0, 1)).elems == ((1, 1), (1, 0))
    assert double_tuple(((0, 0),), (0, 0)).elems == ((0, 0), (0, 0))
    with pytest.raises(ContractError):
        double_tuple(((1, 0),), (1, 0))


def test_doubled_window_block_structure():
    rep = generate("commuting-polynomial", 2, 2, seed=4)
    t, g = ((0, 1), (0, 0)), (2, 0)
    X = build_tilde_gram(rep, t).dense()
    D = np.kron(np.eye(2), evaluate(rep, g))
    W = build_tilde_gram(rep, double_tuple(t, g)).dense()
    assert np.allclose(W, np.block([[X, X @ D], [D.conj().T @ X, X]]), atol=1e-14)


def test_doubling_equivalence_seeded():
    rng = np.random.default_rng(314)
    kinds = ["doubly-commuting-tensor", "column-contraction", "commuting-polynomial",
             "jordan-counterexample"]
    checked = 0
    for k, (t, g) in enumerate(disjoint_instances(rng, 2, 80)):
        kind = kinds[k % len(kinds)]
        rep = generate(kind, 2, 2, seed=k)
        if not window_verdict(rep, t):
            continue
        star = check_condition_star(rep, t, g)
        assert bool(star) == bool(is_psd(build_tilde_gram(rep, double_tuple(t, g))))
        checked += 1
    assert checked >= 60


def test_reduce_step_examples():
    g, t2 = reduce_step(((1, 1), (1, 0)), [0, 1])
    assert g == (1, 0) and t2.elems == ((0, 1), (0, 0))
    g, t2 = reduce_step(((1, 0), (0, 1)), [0, 1])
    assert g == (0, 0) and t2.elems == ((1, 0), (0, 1))


def test_reduce_step_global_meet_is_identity():
    t = ((3, 2, 1), (2, 4, 1), (5, 2, 2))
    g, t2 = reduce_step(t, range(3))
    G = ZnGroup(3)
    assert g == (2, 2, 1)
    assert meet_all(G.element(p) for p in t2) == G.identity()


def test_reduction_soundness_seeded():
    """PSD reduced window + PSD complement + star for the complement => PSD window."""
    rng = np.random.default_rng(99)
    applied = 0
    for k in range(150):
        rep = generate(["commuting-polynomial", "column-contraction", "jordan-counterexample"][k % 3],
                       2, 2, seed=k)
        t = tuple(tuple(int(c) for c in rng.integers(0, 3, size=2))
                  for _ in range(int(rng.integers(2, 5))))
        J = sorted(rng.choice(len(t), size=int(rng.integers(1, len(t))), replace=False).tolist())
        g, reduced = reduce_step(t, J)
        rest = [t[i] for i in range(len(t)) if i not in J]
        if not any(g) or any(min(a, b) for p in rest for a, b in zip(p, g)):
            continue
        if window_verdict(rep, reduced) and window_verdict(rep, rest) and check_condition_star(rep, rest, g):
            assert window_verdict(rep, t)
            applied += 1
    assert applied >= 10


# -- certificates ---------------------------------------------------------------

def test_certificate_tensor_passes():
    rep = generate("doubly-commuting-tensor", 2, 2, seed=3)
    for t in [((2, 0), (0, 2), (1, 1)), ((2, 2), (1, 0), (0, 1), (0, 0)), ((1, 2), (2, 1))]:
        cert = certify_regularity(rep, t)
        assert cert.passed and window_verdict(rep, t)
        assert cert.leaves()


def test_certificate_jordan_has_failing_leaf(jordan):
    t = ((1, 0), (0, 1), (0, 0))
    cert = certify_regularity(jordan, t)
    assert cert.verdict is False
    bad = cert.failing_leaves()
    assert [(leaf.tuple.elems, leaf.params["g"]) for leaf in bad] == [(((1, 0), (0, 0)), (0, 1))]
    assert not window_verdict(jordan, t)


def test_certificate_singleton(jordan):
    cert = certify_regularity(jordan, ((2, 1),))
    assert cert.passed and cert.action == "trivial"
    assert np.array_equal(build_tilde_gram(jordan, ((2, 1),)).dense(), I2)


def test_certificate_depth_limit_marks_unverified():
    rep = generate("commuting-polynomial", 2, 2, seed=0)
    cert = certify_regularity(rep, ((2, 2), (2, 1), (1, 2)), depth_limit=0)
    assert cert.verdict is None
    assert any(node.action == "unverified" for node in cert.walk())


def test_certificate_entry_bound(jordan):
    with pytest.raises(ContractError):
        certify_regularity(jordan, ((40, 40),), entry_sum_bound=64)


def test_certificate_records_meet_division():
    rep = generate("doubly-commuting-tensor", 2, 2, seed=1)
    cert = certify_regularity(rep, ((2, 1), (1, 2), (1, 0)))
    actions = {node.action for node in cert.walk()}
    assert "meet-divide" in actions and "base-star-leaf" in actions
    text = json.dumps(cert.to_json_obj())
    assert json.loads(text)["tuple"] == [[2, 1], [1, 2], [1, 0]]


def test_certificate_soundness_seeded():
    rng = np.random.default_rng(2718)
    kinds = ["commuting-polynomial", "column-contraction", "doubly-commuting-tensor",
             "jordan-counterexample"]
    for k in range(40):
        rep = generate(kinds[k % 4], 2, 2, seed=k)
        t = tuple(tuple(int(c) for c in rng.integers(0, 3, size=2))
                  for _ in range(int(rng.integers(1, 5))))
        cert = certify_regularity(rep, t)
        psd = window_verdict(rep, t)
        if cert.passed:
            assert psd
        if not psd:
            assert cert.failing_leaves()


# -- Brehmer operators ------------------------------------------------------------

def test_brehmer_examples(jordan):
    assert np.array_equal(brehmer_operator(jordan, []), I2)
    assert np.array_equal(brehmer_operator(jordan, [1]), np.diag([1, 0]))
    assert np.array_equal(brehmer_operator(jordan, [1, 2]), np.diag([1, -1]))
    assert np.array_equal(brehmer_operator(jordan, BrehmerIndex.from_indices([2], 2)), np.diag([1, 0]))


def test_brehmer_index():
    U = BrehmerIndex.from_indices([1, 3], 3)
    assert U.mask == 0b101 and U.indices == (1, 3) and U.vector == (1, 0, 1) and len(U) == 2
    with pytest.raises(StructuralError):
        BrehmerIndex.from_indices([4], 3)
    with pytest.raises(StructuralError):
        BrehmerIndex(0b1000, 3)


def test_subset_order():
    labels = [BrehmerIndex(m, 2).indices for m in subset_order(2)]
    assert labels == [(1, 2), (2,), (1,), ()]
    labels3 = [BrehmerIndex(m, 3).indices for m in subset_order(3)]
    assert labels3[0] == (1, 2, 3) and labels3[-1] == ()
    assert [len(u) for u in labels3] == [3, 2, 2, 2, 1, 1, 1, 0]


def test_check_brehmer_jordan(jordan):
    r = check_brehmer(jordan)
    assert not r.verdict
    assert r.witness == [1, 2] and r.lambda_min == -1.0
    assert r.details["recursion_ok"]


def test_check_brehmer_zero_generators():
    rep = Representation((np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2))))
    r = check_brehmer(rep)
    assert r.verdict and r.lambda_min == 1.0
    for m in range(8):
        assert np.array_equal(brehmer_operator(rep, m), np.eye(2))


@pytest.mark.parametrize("seed", range(4))
def test_check_brehmer_tensor_and_column(seed):
    assert check_brehmer(generate("doubly-commuting-tensor", 3, 2, seed)).verdict
    assert check_brehmer(generate("column-contraction", 3, 3, seed)).verdict


def test_check_brehmer_size_limit():
    rep = Representation(tuple(np.zeros((1, 1)) for _ in range(13)))
    with pytest.raises(ContractError):
        check_brehmer(rep)


@pytest.mark.parametrize("kind", ["commuting-polynomial", "jordan-counterexample", "column-contraction"])
def test_recursion_and_telescoping_identities(kind):
    n = 2 if kind == "jordan-counterexample" else 4
    rep = generate(kind, n, 2, seed=6)
    Z = _all_brehmer(rep, n)
    assert recursion_defect(rep, Z, n) <= 1e-10
    assert telescoping_defect(rep, Z, n) <= 1e-10


# -- factorization ------------------------------------------------------------------

def test_factorize_zero_generators():
    fact = factorize_brehmer(scalar_rep(0, 0))
    assert np.array_equal(fact.X.dense(), np.eye(4))
    assert np.allclose(fact.dense_R(), np.eye(4))


@pytest.mark.parametrize("a,b", [(0.6, 0.8), (0.3, 0.6 + 0.2j), (0.8 + 0j, 0.0), (1.0, 0.5)])
def test_factorize_scalar_layout(a, b):
    fact = factorize_brehmer(scalar_rep(a, b))
    assert np.abs(fact.dense_R() - expected_r2_layout(a, b)).max() <= 1e-12
    assert fact.residual <= 1e-10
    assert fact.labels == [(1, 2), (2,), (1,), ()]


def test_factorize_triangularity_under_published_order():
    """Larger sets first with V inside U nonzero makes R upper, not lower, triangular."""
    fact = factorize_brehmer(generate("doubly-commuting-tensor", 3, 2, seed=5))
    assert fact.triangularity() == "upper"
    last = fact.R[-1]
    assert all(np.count_nonzero(last[j]) == 0 for j in range(7))


def test_factorize_tensor_n3():
    for seed in range(3):
        rep = generate("doubly-commuting-tensor", 3, 2, seed)
        fact = factorize_brehmer(rep)
        assert fact.residual <= 1e-9
        assert fact.telescoping_defect <= 1e-10


def test_factorize_prefix():
    rep = generate("doubly-commuting-tensor", 3, 2, seed=8)
    fact = factorize_brehmer(rep, 2)
    assert fact.R.shape == (4, 4, 8, 8)


def test_factorize_jordan_names_violating_subset(jordan):
    with pytest.raises(ContractError, match=r"Z_\{1,2\}") as info:
        factorize_brehmer(jordan)
    assert info.value.witness == [1, 2]


# -- sampled regularity -------------------------------------------------------------

def test_sampled_jordan_witness(jordan):
    r = check_regular_sampled(jordan, max_entry=1)
    assert not r.verdict
    assert r.witness == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert r.lambda_min < -0.4


def test_sampled_unitary_and_column_families():
    assert check_regular_sampled(generate("diagonal-unitary", 2, 3, seed=1)).verdict
    assert check_regular_sampled(generate("column-contraction", 3, 3, seed=1)).verdict


def test_sampled_thread_cap(monkeypatch):
    rep = generate("doubly-commuting-tensor", 2, 2, seed=4)
    serial = check_regular_sampled(rep, workers=1)
    monkeypatch.setenv("LATREG_THREADS", "3")
    threaded = check_regular_sampled(rep, workers=8)
    assert serial.lambda_min == threaded.lambda_min
    assert serial.details["windows_checked"] == threaded.details["windows_checked"]
