"""Tests for the dense multipartite linear algebra layer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qgossip as qg
from qgossip.linalg import (as_operator, hermiticity_defect, frobenius_norm,
                            require_hermitian)
from qgossip.rng import complex_ginibre, make_rng

SZ = np.diag([1.0 + 0j, -1.0])
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)


# ---------------------------------------------------------------------------
# shapes and coercion
# ---------------------------------------------------------------------------

def test_network_shape_basics():
    shape = qg.NetworkShape(3, 2)
    assert shape.total_dim == 8
    assert list(shape.sites()) == [1, 2, 3]
    assert qg.NetworkShape(4, 3).total_dim == 81


def test_network_shape_rejects_bad_arguments():
    with pytest.raises(qg.ValidationError):
        qg.NetworkShape(0, 2)
    with pytest.raises(qg.ValidationError):
        qg.NetworkShape(2, 1)


def test_network_shape_enforces_dimension_cap():
    qg.NetworkShape(12, 2)  # 4096 is the largest admissible qubit network
    with pytest.raises(qg.ResourceLimitError):
        qg.NetworkShape(13, 2)


def test_as_operator_rejects_nonsquare():
    with pytest.raises(qg.DimensionError):
        as_operator(np.zeros((2, 3)))
    with pytest.raises(qg.DimensionError):
        as_operator(np.zeros(4))


def test_hermiticity_defect_and_gate():
    assert hermiticity_defect(SZ) == 0.0
    skew = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    assert hermiticity_defect(skew) == 1.0
    with pytest.raises(qg.ValidationError):
        require_hermitian(skew)


# ---------------------------------------------------------------------------
# kron
# ---------------------------------------------------------------------------

def test_kron_matches_hand_example():
    expected = np.diag([1.0, 1.0, -1.0, -1.0])
    np.testing.assert_allclose(qg.kron(SZ, np.eye(2)), expected, atol=0)


def test_kron_all_site_order():
    # site 1 is the leftmost factor
    got = qg.kron_all([SZ, np.eye(2), SX])
    expected = np.kron(np.kron(SZ, np.eye(2)), SX)
    np.testing.assert_allclose(got, expected, atol=0)
    np.testing.assert_allclose(qg.kron_all([]), [[1.0]], atol=0)


def test_kron_associativity_random():
    rng = make_rng(7)
    for _ in range(20):
        a = complex_ginibre(rng, 2)
        b = complex_ginibre(rng, 3)
        c = complex_ginibre(rng, 2)
        left = qg.kron(qg.kron(a, b), c)
        right = qg.kron(a, qg.kron(b, c))
        np.testing.assert_allclose(left, right, atol=1e-12)


def test_kron_enforces_cap():
    with pytest.raises(qg.ResourceLimitError):
        qg.kron(np.eye(128), np.eye(64))


# ---------------------------------------------------------------------------
# partial trace
# ---------------------------------------------------------------------------

def test_partial_trace_of_product_state():
    rng = make_rng(11)
    shape = qg.NetworkShape(2, 3)
    a = complex_ginibre(rng, 3)
    a = a @ a.conj().T
    b = complex_ginibre(rng, 3)
    b = b @ b.conj().T
    joint = qg.kron(a, b)
    np.testing.assert_allclose(qg.partial_trace(joint, shape, [1]),
                               a * np.trace(b), atol=1e-12)
    np.testing.assert_allclose(qg.partial_trace(joint, shape, [2]),
                               b * np.trace(a), atol=1e-12)


def test_partial_trace_keep_all_is_identity():
    rng = make_rng(12)
    shape = qg.NetworkShape(3, 2)
    x = complex_ginibre(rng, shape.total_dim)
    np.testing.assert_allclose(qg.partial_trace(x, shape, [1, 2, 3]), x, atol=0)


def test_partial_trace_preserves_trace():
    rng = make_rng(13)
    shape = qg.NetworkShape(3, 2)
    for _ in range(10):
        x = complex_ginibre(rng, shape.total_dim)
        for keep in ([1], [2], [3], [1, 3], [2, 3]):
            np.testing.assert_allclose(np.trace(qg.partial_trace(x, shape, keep)),
                                       np.trace(x), atol=1e-11)


def test_partial_trace_composition():
    rng = make_rng(14)
    shape = qg.NetworkShape(3, 2)
    x = complex_ginibre(rng, 8)
    two = qg.partial_trace(x, shape, [1, 2])
    one_direct = qg.partial_trace(x, shape, [1])
    one_via_two = qg.partial_trace(two, qg.NetworkShape(2, 2), [1])
    np.testing.assert_allclose(one_direct, one_via_two, atol=1e-12)


def test_partial_trace_duality_with_lift():
    # Tr[Tr_rest(X) Y] == Tr[X (Y lifted to the kept site)]
    rng = make_rng(15)
    shape = qg.NetworkShape(3, 2)
    for _ in range(25):
        x = complex_ginibre(rng, 8)
        y = complex_ginibre(rng, 2)
        site = int(rng.integers(1, 4))
        lhs = np.trace(qg.partial_trace(x, shape, [site]) @ y)
        rhs = np.trace(x @ qg.lift_local(y, site, shape))
        np.testing.assert_allclose(lhs, rhs, atol=1e-11)


def test_partial_trace_rejects_bad_keep():
    shape = qg.NetworkShape(2, 2)
    x = np.eye(4)
    with pytest.raises(qg.ValidationError):
        qg.partial_trace(x, shape, [])
    with pytest.raises(qg.ValidationError):
        qg.partial_trace(x, shape, [0])
    with pytest.raises(qg.ValidationError):
        qg.partial_trace(x, shape, [3])
    with pytest.raises(qg.DimensionError):
        qg.partial_trace(np.eye(8), shape, [1])


# ---------------------------------------------------------------------------
# eigh
# ---------------------------------------------------------------------------

def test_eigh_known_spectra():
    w, v = qg.eigh(SZ)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=0)
    w, v = qg.eigh(SX)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, SX, atol=1e-15)


def test_eigh_reconstruction_random():
    rng = make_rng(21)
    for _ in range(50):
        d = int(rng.integers(2, 9))
        g = complex_ginibre(rng, d)
        h = (g + g.conj().T) / 2
        w, v = qg.eigh(h)
        assert np.all(np.diff(w) >= 0)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-12)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(qg.ValidationError):
        qg.eigh(np.array([[0, 1], [0, 0]], dtype=np.complex128))


# ---------------------------------------------------------------------------
# norms and vectorization
# ---------------------------------------------------------------------------

def test_frobenius_distance_hand_value():
    assert qg.frobenius_distance(SZ, np.eye(2)) == 2.0
    assert qg.frobenius_distance(SZ, SZ) == 0.0
    with pytest.raises(qg.DimensionError):
        qg.frobenius_distance(np.eye(2), np.eye(3))


def test_frobenius_norm_value():
    assert frobenius_norm(np.ones((2, 2))) == 2.0


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9))
def test_vectorize_round_trip(seed):
    rng = make_rng(seed)
    d = int(rng.integers(1, 7))
    x = complex_ginibre(rng, d)
    np.testing.assert_allclose(qg.unvectorize(qg.vectorize(x)), x, atol=0)


def test_vectorize_column_stacking_identity():
    # vec(A X B) == kron(B.T, A) vec(X)
    rng = make_rng(23)
    for _ in range(25):
        d = int(rng.integers(2, 6))
        a = complex_ginibre(rng, d)
        x = complex_ginibre(rng, d)
        b = complex_ginibre(rng, d)
        lhs = qg.vectorize(a @ x @ b)
        rhs = np.kron(b.T, a) @ qg.vectorize(x)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_unvectorize_rejects_bad_length():
    with pytest.raises(qg.DimensionError):
        qg.unvectorize(np.zeros(5))
