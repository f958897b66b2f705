from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varprod import linalg
from varprod.observables import gellmann_matrices
from varprod.states import pauli_matrices

from conftest import random_complex, seeds

SX, SY, SZ = pauli_matrices()
I2 = np.eye(2)


def leibniz(a):
    """Brute-force determinant over all permutations."""
    d = a.shape[0]
    total = 0j
    for perm in permutations(range(d)):
        sign = 1
        for i in range(d):
            for j in range(i + 1, d):
                if perm[i] > perm[j]:
                    sign = -sign
        term = 1 + 0j
        for i, p in enumerate(perm):
            term *= a[i, p]
        total += sign * term
    return total


def test_multiply_examples():
    assert np.array_equal(linalg.multiply(I2, I2), I2)
    assert np.allclose(linalg.multiply(SX, SY), 1j * SZ, atol=0)
    lam = gellmann_matrices()
    e23 = np.zeros((3, 3))
    e23[1, 2] = 1
    assert np.allclose(linalg.multiply(lam[0], lam[3]), e23, atol=0)


def test_multiply_dimension_mismatch():
    with pytest.raises(linalg.DimensionError):
        linalg.multiply(I2, np.eye(3))


def test_as_matrix_rejects_bad_input():
    with pytest.raises(linalg.DimensionError):
        linalg.as_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.as_matrix(np.array([[np.nan, 0], [0, 1]]))


def test_adjoint_and_trace(rng):
    assert np.array_equal(linalg.adjoint(SY), SY)
    assert np.array_equal(linalg.adjoint(1j * I2), -1j * I2)
    x = random_complex(4, rng)
    assert np.array_equal(linalg.adjoint(linalg.adjoint(x)), x)
    assert linalg.trace(np.eye(3)) == 3
    assert linalg.trace(SZ) == 0
    assert abs(linalg.trace(gellmann_matrices()[7])) < 1e-15


def test_determinant_examples():
    assert linalg.determinant(np.eye(5)) == pytest.approx(1)
    assert linalg.determinant(np.array([[2, 1j], [-1j, 2]])) == pytest.approx(3)
    assert linalg.determinant(np.diag([2.0, 3.0, 5.0])) == pytest.approx(30)
    assert linalg.det_lu(np.zeros((4, 4))) == 0


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_cofactor_agrees_with_lu(dim, rng):
    for _ in range(50):
        a = random_complex(dim, rng)
        ref = linalg.det_lu(a)
        assert abs(linalg.determinant(a) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 6])
def test_determinant_matches_leibniz(dim, rng):
    a = random_complex(dim, rng)
    ref = leibniz(a)
    assert abs(linalg.determinant(a) - ref) <= 1e-11 * abs(ref)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=st.integers(1, 6))
def test_determinant_multiplicative(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_complex(dim, rng), random_complex(dim, rng)
    lhs = linalg.determinant(a @ b)
    rhs = linalg.determinant(a) * linalg.determinant(b)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=st.integers(1, 6))
def test_trace_cyclic(seed, dim):
    rng = np.random.default_rng(seed)
    a, b = random_complex(dim, rng), random_complex(dim, rng)
    assert abs(linalg.trace(a @ b) - linalg.trace(b @ a)) <= 1e-12 * max(1.0, np.abs(a).sum() * np.abs(b).sum())


def test_eigenvalue_examples():
    assert np.allclose(linalg.hermitian_eigenvalues(SZ), [-1, 1], atol=1e-15)
    assert np.allclose(linalg.hermitian_eigenvalues(np.eye(3) / 3), [1 / 3] * 3, atol=1e-15)
    assert np.allclose(linalg.hermitian_eigenvalues(SX), [-1, 1], atol=1e-14)
    assert np.allclose(linalg.hermitian_eigenvalues(SY), [-1, 1], atol=1e-14)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(linalg.HermiticityError, match="2.000e"):
        linalg.hermitian_eigenvalues(np.array([[0, 1], [-1, 0]]))


@settings(max_examples=80, deadline=None)
@given(seed=seeds, dim=st.integers(1, 16))
def test_eigenvalues_match_reference(seed, dim):
    rng = np.random.default_rng(seed)
    g = random_complex(dim, rng)
    h = 0.5 * (g + g.conj().T)
    ours = linalg.hermitian_eigenvalues(h)
    assert np.all(np.diff(ours) >= 0)
    assert np.allclose(ours, np.linalg.eigvalsh(h), atol=1e-11 * (1 + np.linalg.norm(h)))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=st.integers(1, 6))
def test_determinant_is_eigenvalue_product(seed, dim):
    rng = np.random.default_rng(seed)
    g = random_complex(dim, rng)
    h = 0.5 * (g + g.conj().T)
    det = linalg.determinant(h)
    prod = np.prod(linalg.hermitian_eigenvalues(h))
    assert abs(det - prod) <= 1e-9 * max(abs(prod), 1e-300) + 1e-12


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=st.integers(1, 8), rank=st.integers(1, 8))
def test_gram_eigenvalues_nonnegative(seed, dim, rank):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((rank, dim)) + 1j * rng.standard_normal((rank, dim))
    assert linalg.hermitian_eigenvalues(x.conj().T @ x)[0] >= -1e-10


def test_degenerate_and_diagonal_inputs():
    assert np.array_equal(linalg.hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    assert np.allclose(linalg.hermitian_eigenvalues(np.ones((4, 4))), [0, 0, 0, 4], atol=1e-13)
