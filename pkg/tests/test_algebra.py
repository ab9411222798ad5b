import math

import mpmath
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from diracfrac.algebra import (
    commutator,
    frobenius_norm,
    mat_exp,
    mat_mul,
    mat_pow,
    unity_roots,
)
from diracfrac.errors import DomainError, InvalidOrderError, ShapeError
from diracfrac.families import lambda_matrices, pauli

I2 = np.eye(2)


def series_exp(a, terms=80):
    """Oracle: plain Taylor series on the matrix halved until norm <= 0.25."""
    k = max(0, math.ceil(math.log2(max(np.linalg.norm(a) / 0.25, 1.0))))
    b = a / 2**k
    out = np.eye(a.shape[0], dtype=complex)
    term = out.copy()
    for j in range(1, terms):
        term = term @ b / j
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def complex_matrices(d):
    parts = arrays(np.float64, (2, d, d), elements=st.floats(-2, 2))
    return parts.map(lambda x: x[0] + 1j * x[1])


def test_unity_roots_cubic():
    r = unity_roots(3)
    expected = [1, complex(-0.5, math.sqrt(3) / 2), complex(-0.5, -math.sqrt(3) / 2)]
    np.testing.assert_allclose(r.roots, expected, atol=1e-15)
    assert abs(r.roots.sum()) <= 1e-14


def test_unity_roots_trivial_and_quartic():
    assert list(unity_roots(1).roots) == [1]
    r = unity_roots(4)
    np.testing.assert_allclose(r.roots, [1, 1j, -1, -1j], atol=0)
    assert abs(r.roots.sum()) <= 1e-14
    assert abs(np.prod(r.roots) - (-1)) <= 1e-14


@pytest.mark.parametrize("n", range(1, 13))
def test_unity_roots_invariants(n):
    r = unity_roots(n)
    assert np.all(np.abs(np.abs(r.roots) - 1) <= 1e-15)
    if n >= 2:
        assert abs(r.roots.sum()) <= 1e-14
    assert abs(np.prod(r.roots) - r.expected_product) <= 1e-14
    for j in range(n):
        for k in range(n):
            assert abs(r[j] * r[k] - r[r.index_product(j, k)]) <= 1e-14


@pytest.mark.parametrize("bad", [0, -3])
def test_unity_roots_rejects_bad_order(bad):
    with pytest.raises(InvalidOrderError):
        unity_roots(bad)


def test_mat_mul_examples():
    s1 = pauli()[0]
    np.testing.assert_array_equal(mat_mul(I2, s1), s1)
    np.testing.assert_array_equal(mat_mul(s1, s1), I2)
    l1 = lambda_matrices()[0]
    np.testing.assert_array_equal(mat_mul(mat_mul(l1, l1), l1), np.eye(3))


def test_mat_mul_shape_error():
    with pytest.raises(ShapeError):
        mat_mul(np.ones((2, 3)), np.ones((2, 3)))


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        mat_mul(np.array([[np.nan]]), np.array([[1.0]]))


def test_commutator_examples():
    s1 = pauli()[0]
    assert frobenius_norm(commutator(s1, s1)) == 0
    with pytest.raises(ShapeError):
        commutator(np.eye(2), np.eye(3))


def test_frobenius_examples():
    assert frobenius_norm(np.zeros((2, 2))) == 0
    assert frobenius_norm(np.eye(3)) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert frobenius_norm(pauli()[1]) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_mat_exp_examples():
    np.testing.assert_array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))
    got = mat_exp(np.diag([1, 1j]))
    np.testing.assert_allclose(got, np.diag([math.e, complex(math.cos(1), math.sin(1))]), rtol=1e-13, atol=1e-15)
    theta = 0.3
    gen = theta * np.array([[0, -1], [1, 0]])
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    np.testing.assert_allclose(series_exp(gen), rot, atol=1e-15)
    np.testing.assert_allclose(mat_exp(gen), rot, atol=1e-15)


def test_mat_exp_requires_square():
    with pytest.raises(ShapeError):
        mat_exp(np.ones((2, 3)))


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8, 16])
@pytest.mark.parametrize("scale", [0.1, 1.0, 5.0, 20.0])
def test_mat_exp_matches_oracles(rng, d, scale):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a *= scale / np.linalg.norm(a)
    got = mat_exp(a)
    ref = series_exp(a)
    assert np.linalg.norm(got - ref) / np.linalg.norm(ref) <= 1e-12
    assert np.linalg.norm(got - scipy.linalg.expm(a)) / np.linalg.norm(ref) <= 1e-12


def test_mat_exp_against_extended_precision(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    mpmath.mp.dps = 40
    ref = np.array(mpmath.expm(mpmath.matrix(a.tolist())).tolist(), dtype=complex)
    assert np.linalg.norm(mat_exp(a) - ref) / np.linalg.norm(ref) <= 1e-12


@given(complex_matrices(3), complex_matrices(3), complex_matrices(3))
def test_commutator_antisymmetry_and_jacobi(a, b, c):
    np.testing.assert_allclose(commutator(a, b), -commutator(b, a), atol=1e-14, rtol=0)
    jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert frobenius_norm(jac) <= 1e-12


@given(complex_matrices(4))
def test_mat_exp_inverse(a):
    norm = np.linalg.norm(a)
    if norm > 5:
        a = a * (5 / norm)
    assert frobenius_norm(mat_exp(a) @ mat_exp(-a) - np.eye(4)) <= 1e-10


@given(complex_matrices(3), st.integers(0, 9))
def test_mat_pow_matches_repeated_product(a, k):
    ref = np.eye(3, dtype=complex)
    for _ in range(k):
        ref = ref @ a
    np.testing.assert_allclose(mat_pow(a, k), ref, rtol=1e-12, atol=1e-9)
