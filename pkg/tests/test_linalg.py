import numpy as np
import pytest

from mubgame.errors import ContractError
from mubgame.game import perfect_strategy
from mubgame.linalg import (
    hermitian_eigen,
    is_projective_povm,
    is_psd,
    is_unitary,
    jacobi_eigh,
    kron,
    matrix_from_pairs,
    matrix_to_pairs,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_hermitian(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return G + G.conj().T


def random_matrix(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_eigen_examples():
    np.testing.assert_allclose(hermitian_eigen(np.eye(3)).values, [1, 1, 1])
    np.testing.assert_allclose(hermitian_eigen(np.diag([0.2, 0.8])).values, [0.2, 0.8])
    np.testing.assert_allclose(hermitian_eigen(X).values, [-1, 1], atol=1e-14)


def test_eigen_rejects_bad_input():
    with pytest.raises(ContractError, match="square"):
        hermitian_eigen(np.ones((2, 3)))
    with pytest.raises(ContractError, match="not Hermitian"):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 13])
def test_eigen_reconstruction_and_orthonormality(n):
    rng = np.random.default_rng(n)
    M = random_hermitian(rng, n)
    w, V = hermitian_eigen(M)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(M - V @ np.diag(w) @ V.conj().T) < 1e-8 * max(1, np.linalg.norm(M))
    assert np.max(np.abs(V.conj().T @ V - np.eye(n))) < 1e-9
    assert abs(np.trace(M).real - w.sum()) < 1e-9
    # independent route: LAPACK
    np.testing.assert_allclose(w, np.linalg.eigvalsh(M), atol=1e-9)


def test_eigen_recovers_planted_spectrum():
    rng = np.random.default_rng(7)
    n = 6
    lam = np.array([-2.0, -0.5, 0.1, 0.4, 1.3, 3.0])
    Q, _ = np.linalg.qr(random_matrix(rng, (n, n)))
    w, _ = hermitian_eigen(Q @ np.diag(lam) @ Q.conj().T)
    np.testing.assert_allclose(w, lam, atol=1e-8)


def test_eigen_deterministic():
    M = random_hermitian(np.random.default_rng(3), 5)
    a, b = jacobi_eigh(M), jacobi_eigh(M.copy())
    assert np.array_equal(a.values, b.values) and np.array_equal(a.vectors, b.vectors)


def test_eigen_degenerate_subspace_projector():
    # eigenvector choice inside a degenerate eigenspace is free; the projector is not
    M = np.diag([1.0, 1.0, 2.0]).astype(complex)
    Q, _ = np.linalg.qr(random_matrix(np.random.default_rng(1), (3, 3)))
    w, V = hermitian_eigen(Q @ M @ Q.conj().T)
    P = V[:, :2] @ V[:, :2].conj().T
    np.testing.assert_allclose(P, Q[:, :2] @ Q[:, :2].conj().T, atol=1e-9)


def test_kron_examples():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    K = kron(X, np.eye(2))
    np.testing.assert_array_equal(K[:2, 2:], np.eye(2))
    np.testing.assert_array_equal(K[2:, :2], np.eye(2))
    np.testing.assert_array_equal(K[:2, :2], 0)
    B = random_matrix(np.random.default_rng(0), (3, 3))
    np.testing.assert_allclose(kron([[2 - 1j]], B), (2 - 1j) * B)


def test_kron_mixed_product():
    rng = np.random.default_rng(11)
    A, C = random_matrix(rng, (2, 3)), random_matrix(rng, (3, 2))
    B, D = random_matrix(rng, (3, 4)), random_matrix(rng, (4, 3))
    assert np.max(np.abs(kron(A, B) @ kron(C, D) - kron(A @ C, B @ D))) < 1e-9


def test_projective_povm_examples():
    P0, P1 = np.diag([1, 0]), np.diag([0, 1])
    assert is_projective_povm([P0, P1], 1e-9)
    assert not is_projective_povm([np.eye(2) / 2, np.eye(2) / 2], 1e-9)
    assert is_projective_povm(perfect_strategy(3).povm, 1e-9)
    with pytest.raises(ContractError):
        is_projective_povm([np.eye(2), np.eye(3)], 1e-9)


def test_predicates():
    assert is_unitary(X) and not is_unitary(2 * X)
    assert is_psd(np.diag([0, 1e-12])) and not is_psd(np.diag([1, -1e-3]))
    assert not is_psd(np.array([[0, 1], [0, 0]]))


def test_matrix_pairs_roundtrip():
    M = random_matrix(np.random.default_rng(5), (3, 3))
    assert np.array_equal(matrix_from_pairs(matrix_to_pairs(M)), M)
