import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latreg.dilation import (
    UNITARY_LAYOUT,
    alpha_power,
    check_covariant_pair,
    compression_defect,
    conjugation_alpha,
    defect_operators,
    finite_unitary_dilation,
    unitarity_defect,
    window_dilation,
)
from latreg.errors import ContractError, StructuralError
from latreg.regularity import build_tilde_gram
from latreg.representation import JORDAN_BLOCK, Representation, generate, spectral_norm

from conftest import scalar_rep


def rand_contraction(rng, d, norm=None):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    norm = rng.uniform(0, 1) if norm is None else norm
    return A * (norm / spectral_norm(A))


# -- finite unitary dilation -----------------------------------------------------

def test_zero_dilates_to_swap():
    U = finite_unitary_dilation([[0.0]], 1)
    assert np.array_equal(U, np.array([[0, 1], [1, 0]]))


def test_scalar_dilation():
    c = 0.6 + 0.0j
    U = finite_unitary_dilation([[c]], 1)
    assert np.allclose(U, [[0.6, 0.8], [0.8, -0.6]], atol=1e-15)
    U = finite_unitary_dilation([[0.5]], 2)
    assert np.allclose(U[:, 0], [0.5, np.sqrt(0.75), 0])
    assert np.allclose(U[2], [0, 1, 0])


def test_jordan_dilation_compressions():
    U = finite_unitary_dilation(JORDAN_BLOCK, 3)
    assert U.shape == (8, 8)
    assert unitarity_defect(U) <= 1e-15
    assert compression_defect(U, JORDAN_BLOCK, 3) <= 1e-15
    U2 = U @ U
    assert np.allclose(U2[:2, :2], 0)


def test_unitary_layout_positions():
    rng = np.random.default_rng(5)
    T = rand_contraction(rng, 2)
    U = finite_unitary_dilation(T, 3)
    D, D_adj = defect_operators(T)
    blk = lambda r, c: U[2 * (r % 4):2 * (r % 4) + 2, 2 * (c % 4):2 * (c % 4) + 2]
    assert np.array_equal(blk(*UNITARY_LAYOUT["T"]), T)
    assert np.array_equal(blk(*UNITARY_LAYOUT["defect"]), D)
    assert np.array_equal(blk(*UNITARY_LAYOUT["defect_adjoint"]), D_adj)
    assert np.array_equal(blk(*UNITARY_LAYOUT["minus_adjoint"]), -T.conj().T)
    assert np.array_equal(blk(2, 1), np.eye(2)) and np.array_equal(blk(3, 2), np.eye(2))


def test_defect_operators_identities():
    rng = np.random.default_rng(6)
    for norm in (0.3, 1.0):
        T = rand_contraction(rng, 3, norm)
        D, D_adj = defect_operators(T)
        assert spectral_norm(T.conj().T @ T + D @ D - np.eye(3)) <= 1e-14
        assert spectral_norm(T @ T.conj().T + D_adj @ D_adj - np.eye(3)) <= 1e-14
        assert spectral_norm(T.conj().T @ D_adj - D @ T.conj().T) <= 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 6), st.booleans())
def test_dilation_is_unitary_and_compresses(seed, d, N, on_boundary):
    rng = np.random.default_rng(seed)
    T = rand_contraction(rng, d, 1.0 if on_boundary else None)
    U = finite_unitary_dilation(T, N)
    assert unitarity_defect(U) <= 1e-10
    assert compression_defect(U, T, N) <= 1e-9


def test_dilation_reproduces_powers_window():
    """``P U^j* U^i P`` agrees with the window of ``(0), (1), ..., (N)``."""
    rng = np.random.default_rng(11)
    T = rand_contraction(rng, 2, 0.9)
    N = 4
    U = finite_unitary_dilation(T, N)
    X = build_tilde_gram(Representation((T,)), [(k,) for k in range(N + 1)])
    powers = [np.linalg.matrix_power(U, k) for k in range(N + 1)]
    for i in range(N + 1):
        for j in range(N + 1):
            block = (powers[j].conj().T @ powers[i])[:2, :2]
            assert spectral_norm(block - X[i, j]) <= 1e-12


def test_dilation_errors():
    with pytest.raises(ContractError):
        finite_unitary_dilation([[1.5]], 2)
    with pytest.raises(ContractError):
        finite_unitary_dilation([[0.5]], 0)
    with pytest.raises(StructuralError):
        finite_unitary_dilation(np.zeros((2, 3)), 2)


# -- window dilation --------------------------------------------------------------

def test_window_dilation_scalar():
    wd = window_dilation(scalar_rep(0.5), [(0,), (1,)])
    assert np.allclose(wd.gram(), [[1, 0.5], [0.5, 1]])
    assert wd.r == 2 and len(wd.blocks) == 2


def test_window_dilation_unitary_has_rank_d():
    rep = generate("diagonal-unitary", 2, 3, seed=1)
    wd = window_dilation(rep, [(0, 0), (1, 0), (0, 2), (1, 1)])
    assert wd.r == 3
    X = build_tilde_gram(rep, [(0, 0), (1, 0), (0, 2), (1, 1)]).dense()
    assert spectral_norm(wd.gram() - X) <= 1e-12


@pytest.mark.parametrize("method", ["cholesky", "eigh"])
def test_window_dilation_tensor_family(method):
    t = [(2, 0, 1), (0, 1, 0), (1, 1, 1), (0, 0, 0)]
    for seed in range(5):
        rep = generate("doubly-commuting-tensor", 3, 2, seed)
        wd = window_dilation(rep, t, method=method)
        X = build_tilde_gram(rep, t).dense()
        assert spectral_norm(wd.gram() - X) <= 1e-10 * max(1, spectral_norm(X))


def test_window_dilation_jordan_raises(jordan):
    t = ((0, 0), (0, 1), (1, 0), (1, 1))
    with pytest.raises(ContractError) as info:
        window_dilation(jordan, t)
    assert info.value.witness == t
    assert info.value.lambda_min < 0


def test_window_dilation_json():
    wd = window_dilation(scalar_rep(0.3j), [(0,), (2,)])
    obj = json.loads(json.dumps(wd.to_json_obj()))
    assert obj["r"] == wd.r and len(obj["blocks"]) == 2


# -- covariance ---------------------------------------------------------------------

def test_alpha_power_composes():
    A = np.array([[0, 1], [1, 0]])
    c = np.array([1.0, 2.0])
    assert np.allclose(alpha_power([A], (2,), c), c)
    assert np.allclose(alpha_power([A], (1,), c), [2, 1])
    assert np.allclose(alpha_power([lambda v: 2 * v], (3,), c), 8 * c)


def test_covariance_trivial_pair():
    rep = generate("commuting-polynomial", 2, 3, seed=2)
    r = check_covariant_pair([np.eye(3)], [np.eye(1), np.eye(1)], rep)
    assert r.verdict and r.details["max_defect"] <= 1e-12


def test_covariance_diagonal_algebra_under_unitaries():
    rep = generate("diagonal-unitary", 2, 3, seed=4)
    pis = [np.diag(e) for e in np.eye(3)]
    alpha = conjugation_alpha(pis, rep)
    r = check_covariant_pair(pis, alpha, rep, samples=30)
    assert r.verdict and r.details["max_defect"] <= 1e-12


def test_covariance_detects_wrong_action(jordan):
    pis = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    r = check_covariant_pair(pis, [np.eye(2), np.eye(2)], jordan)
    assert not r.verdict and r.witness is not None


def test_covariance_shape_errors(jordan):
    with pytest.raises(StructuralError):
        check_covariant_pair([np.eye(3)], [np.eye(1), np.eye(1)], jordan)
    with pytest.raises(StructuralError):
        check_covariant_pair([np.eye(2)], [np.eye(1)], jordan)
    with pytest.raises(StructuralError):
        check_covariant_pair([np.eye(2)], [np.eye(2), np.eye(1)], jordan)


def test_conjugation_leaving_span_raises(jordan):
    with pytest.raises(ContractError):
        conjugation_alpha([np.diag([1.0, 0.0])], jordan)
