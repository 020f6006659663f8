"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The eigensolver
here is a cyclic Jacobi method for Hermitian matrices; it is the reference
kernel and is cross-checked against LAPACK in the test-suite. Inner loops of
the optimizer call ``numpy.linalg.eigh`` directly for speed.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import ContractError

__all__ = [
    "EigenResult",
    "dagger",
    "hermitian_eigen",
    "is_hermitian",
    "is_projective_povm",
    "is_psd",
    "is_unitary",
    "kron",
    "lambda_max",
    "matrix_from_pairs",
    "matrix_to_pairs",
    "projector",
]

PSD_TOL = 1e-9


class EigenResult(NamedTuple):
    values: np.ndarray  # ascending, real
    vectors: np.ndarray  # columns are orthonormal eigenvectors


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ContractError(f"expected a 2-d matrix, got shape {A.shape}")
    return A


def dagger(M: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def projector(v: np.ndarray) -> np.ndarray:
    """|v><v| for a (not necessarily normalised) vector."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def is_hermitian(M, tol: float = 1e-9) -> bool:
    A = as_matrix(M)
    return A.shape[0] == A.shape[1] and bool(np.max(np.abs(A - dagger(A)), initial=0.0) <= tol)


def is_unitary(M, tol: float = 1e-9) -> bool:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(A) @ A - np.eye(A.shape[0]))) <= tol)


def is_psd(M, tol: float = PSD_TOL) -> bool:
    """Hermitian (within ``tol``) with all eigenvalues >= -tol."""
    if not is_hermitian(M, tol):
        return False
    A = as_matrix(M)
    return bool(np.linalg.eigvalsh((A + dagger(A)) / 2)[0] >= -tol)


def lambda_max(M) -> float:
    """Largest eigenvalue of a Hermitian matrix."""
    A = as_matrix(M)
    return float(np.linalg.eigvalsh((A + dagger(A)) / 2)[-1])


def kron(A, B) -> np.ndarray:
    """Tensor product; ``A`` indexes the outer (slow) factor."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def _offdiag_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigh(M, tol: float = 1e-12, max_sweeps: int = 100) -> EigenResult:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``A[p, q]`` and then
    applies a real Givens rotation, so the accumulated transform stays
    unitary. Sweeps stop once the off-diagonal Frobenius mass drops below
    ``tol * max(1, ||M||_F)``.
    """
    A = as_matrix(M).copy()
    n = A.shape[0]
    A = (A + dagger(A)) / 2
    V = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        if _offdiag_norm(A) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                app, aqq = A[p, p].real, A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = dagger(G) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ G
    else:
        raise ContractError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    values = np.diag(A).real
    order = np.argsort(values, kind="stable")
    return EigenResult(values[order], V[:, order])


def hermitian_eigen(M, tol: float = 1e-9) -> EigenResult:
    """Full spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``ContractError`` for non-square input or when ``M`` differs from
    its adjoint by more than ``tol`` in any entry.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ContractError(f"hermitian_eigen needs a square matrix, got {A.shape}")
    defect = float(np.max(np.abs(A - dagger(A)), initial=0.0))
    if defect > tol:
        raise ContractError(f"matrix is not Hermitian: max |M - M^dagger| = {defect:.3e} > {tol:g}")
    return jacobi_eigh(A)


def is_projective_povm(elements: Sequence, tol: float = 1e-9) -> bool:
    """True iff every element is a Hermitian PSD projector and they sum to identity."""
    Ms = [as_matrix(M) for M in elements]
    if not Ms:
        return False
    n = Ms[0].shape[0]
    if any(M.shape != (n, n) for M in Ms):
        raise ContractError("POVM elements have mismatched shapes")
    for M in Ms:
        if not is_psd(M, tol):
            return False
        if np.max(np.abs(M @ M - M)) > tol:
            return False
    return bool(np.max(np.abs(sum(Ms) - np.eye(n))) <= tol)


def matrix_to_pairs(M) -> list[list[list[float]]]:
    """JSON-friendly encoding: rows of ``[re, im]`` pairs."""
    A = as_matrix(M)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_pairs(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ContractError(f"expected rows of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]
