import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcorr import linalg
from qcorr.errors import DimensionError, NotHermitianError
from qcorr.states import PHI_PLUS, random_state

from conftest import random_hermitian

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tensor_identity_and_diagonal():
    assert np.allclose(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))
    out = linalg.tensor(np.diag([1, 0]), np.diag([0, 1]))
    assert np.allclose(out, np.diag([0, 1, 0, 0]))


def test_tensor_block_structure():
    rho = random_state(2, 2, 7)
    out = linalg.tensor(np.diag([1, 0]), rho)
    assert np.allclose(out[:2, :2], rho)
    assert np.allclose(out[2:, :], 0) and np.allclose(out[:, 2:], 0)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_tensor_associative(seed):
    a, b, c = (random_hermitian(2, [seed, i]) for i in range(3))
    left = linalg.tensor(linalg.tensor(a, b), c)
    right = linalg.tensor(a, linalg.tensor(b, c))
    assert np.max(np.abs(left - right)) <= 1e-12


def test_partial_trace_of_product():
    ra, rb = random_state(2, 2, 1), random_state(3, 3, 2)
    m = linalg.tensor(ra, rb)
    assert np.allclose(linalg.partial_trace(m, 2, 3, "A"), ra, atol=1e-12)
    assert np.allclose(linalg.partial_trace(m, 2, 3, "B"), rb, atol=1e-12)


def test_partial_trace_bell_is_maximally_mixed():
    m = linalg.projector(PHI_PLUS)
    assert np.allclose(linalg.partial_trace(m, 2, 2, "A"), np.eye(2) / 2)
    assert np.allclose(linalg.partial_trace(m, 2, 2, "B"), np.eye(2) / 2)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_partial_trace_preserves_trace_and_scales(seed):
    h = random_hermitian(4, seed)
    assert abs(np.trace(linalg.partial_trace(h, 2, 2, "A")) - np.trace(h)) <= 1e-12
    a, b = random_hermitian(2, [seed, 1]), random_hermitian(2, [seed, 2])
    reduced = linalg.partial_trace(linalg.tensor(a, b), 2, 2, "A")
    assert np.max(np.abs(reduced - a * np.trace(b))) <= 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        linalg.partial_trace(np.eye(4), 2, 3)


def test_partial_transpose_product_rule():
    ra, rb = random_state(2, 2, 3), random_state(2, 2, 4)
    out = linalg.partial_transpose(np.kron(ra, rb), 2, 2, "B")
    assert np.allclose(out, np.kron(ra, rb.T))
    out_a = linalg.partial_transpose(np.kron(ra, rb), 2, 2, "A")
    assert np.allclose(out_a, np.kron(ra.T, rb))


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_partial_transpose_involution_and_trace(seed):
    h = random_hermitian(6, seed)
    for side in "AB":
        once = linalg.partial_transpose(h, 2, 3, side)
        assert np.allclose(linalg.partial_transpose(once, 2, 3, side), h)
        assert abs(np.trace(once) - np.trace(h)) <= 1e-12


def test_partial_transpose_bell_state():
    # hand-written: PT_B of |phi+><phi+| is SWAP/2
    expected = 0.5 * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    out = linalg.partial_transpose(linalg.projector(PHI_PLUS), 2, 2, "B")
    assert np.allclose(out, expected)
    assert np.isclose(np.linalg.eigvalsh(expected)[0], -0.5)
    assert np.isclose(linalg.herm_eigen(out).eigenvalues[0], -0.5)


def test_herm_eigen_examples():
    assert np.allclose(linalg.herm_eigen(np.eye(2)).eigenvalues, [1, 1])
    assert np.allclose(linalg.herm_eigen(np.diag([0.75, 0.25])).eigenvalues, [0.25, 0.75])
    w, v = linalg.herm_eigen(np.array([[0, 1], [1, 0]]))
    assert np.allclose(w, [-1, 1])
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert np.isclose(abs(np.vdot(v[:, 0], minus)), 1)
    assert np.isclose(abs(np.vdot(v[:, 1], plus)), 1)
    # phase convention: first nonzero entry real positive
    assert np.allclose(v[0], np.abs(v[0]))


@given(seeds, st.integers(min_value=1, max_value=16))
@settings(max_examples=40, deadline=None)
def test_herm_eigen_reconstruction(seed, dim):
    h = random_hermitian(dim, seed)
    w, v = linalg.herm_eigen(h)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(v.conj().T @ v - np.eye(dim)) <= 1e-10
    assert np.linalg.norm((v * w) @ v.conj().T - h) <= 1e-10


def test_herm_eigen_symmetrises_round_off_and_rejects_non_hermitian():
    h = random_hermitian(3, 0)
    noisy = h + 1e-12 * np.triu(np.ones((3, 3)), 1)
    w, _ = linalg.herm_eigen(noisy)
    assert np.allclose(w, np.linalg.eigvalsh(h))
    with pytest.raises(NotHermitianError):
        linalg.herm_eigen(np.array([[0, 1], [0, 0]]))


def test_herm_eigen_deterministic():
    h = random_hermitian(5, 11)
    a, b = linalg.herm_eigen(h), linalg.herm_eigen(h.copy())
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_as_matrix_rejects_nan():
    with pytest.raises(Exception):
        linalg.as_matrix([[np.nan, 0], [0, 1]])
