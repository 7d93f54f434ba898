"""Dense operator algebra used throughout the package.

Operators are plain ``numpy`` arrays of shape ``(d, d)`` with complex dtype.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import InputError

HERMITIAN_RTOL = 1e-12

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_operator(X, dim: int | None = None) -> np.ndarray:
    """Coerce ``X`` to a square complex matrix, optionally checking its dimension."""
    A = np.asarray(X, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    if dim is not None and A.shape[0] != dim:
        raise InputError(f"expected dimension {dim}, got {A.shape[0]}")
    return A


def _same_dim(X: np.ndarray, Y: np.ndarray) -> None:
    if X.shape != Y.shape:
        raise InputError(f"dimension mismatch: {X.shape[0]} vs {Y.shape[0]}")


def dagger(X) -> np.ndarray:
    return np.asarray(X).conj().T


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt pairing ``tr(X Y^dagger)``."""
    X, Y = as_operator(X), as_operator(Y)
    _same_dim(X, Y)
    return complex(np.vdot(Y, X))


def frobenius_norm(X) -> float:
    """The 2-norm ``sqrt(tr(X X^dagger))``."""
    return float(np.linalg.norm(as_operator(X), "fro"))


def is_hermitian(X, rtol: float = HERMITIAN_RTOL) -> bool:
    X = as_operator(X)
    return bool(np.max(np.abs(X - dagger(X))) <= rtol * (1.0 + frobenius_norm(X)))


def spectrum(X) -> np.ndarray:
    """Eigenvalues of a Hermitian operator in nonincreasing order."""
    X = as_operator(X)
    if not is_hermitian(X):
        raise InputError("spectrum requires a Hermitian operator")
    return np.linalg.eigvalsh((X + dagger(X)) / 2)[::-1]


def singular_values(X) -> np.ndarray:
    X = as_operator(X)
    if is_hermitian(X):
        return np.sort(np.abs(np.linalg.eigvalsh((X + dagger(X)) / 2)))[::-1]
    return np.linalg.svd(X, compute_uv=False)


def trace_norm(X) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(X)))


def negativity(X) -> float:
    """``(||X||_1 - tr X) / 2`` for Hermitian ``X``: the size of its negative part."""
    X = as_operator(X)
    if not is_hermitian(X):
        raise InputError("negativity is only defined for Hermitian operators")
    return max(0.0, (trace_norm(X) - float(np.trace(X).real)) / 2)


def is_psd(X, tol: float = 1e-10) -> bool:
    X = as_operator(X)
    return is_hermitian(X) and bool(spectrum(X)[-1] >= -tol)


def tensor_product(X, Y) -> np.ndarray:
    return np.kron(as_operator(X), as_operator(Y))


def maxent_vector(d: int) -> np.ndarray:
    """Amplitudes of ``(1/sqrt d) sum_j |jj>``."""
    if d < 1:
        raise InputError("dimension must be positive")
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return v


def maxent_state(d: int) -> np.ndarray:
    """Projector onto the maximally entangled state of two ``d``-level systems."""
    v = maxent_vector(d)
    return np.outer(v, v.conj())


def schmidt_state(lam: Sequence[float]) -> np.ndarray:
    """Projector onto ``sum_i lam_i |ii>``."""
    lam = np.asarray(lam, dtype=float)
    d = lam.size
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = lam
    return np.outer(v, v.conj())


def bloch_operator(x: Sequence[float]) -> np.ndarray:
    """``(1 + x . sigma) / 2`` for any real 3-vector (not restricted to the ball)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise InputError("Bloch vector must have three components")
    return (PAULI_I + x[0] * PAULI_X + x[1] * PAULI_Y + x[2] * PAULI_Z) / 2


def bloch_vector(X) -> np.ndarray:
    """Inverse of :func:`bloch_operator` on the real part of the Pauli expansion."""
    X = as_operator(X, 2)
    return np.array([np.trace(X @ P).real for P in (PAULI_X, PAULI_Y, PAULI_Z)])


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Density matrix from a Ginibre draw (rank 1 gives a random pure state)."""
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ dagger(G)
    return rho / np.trace(rho).real
