"""Exact complex linear algebra for the 2x2 and 4x4 matrices used here.

Everything is a plain complex128 numpy array; this module only adds the
Pauli operators, validated constructors, and the handful of helpers the
rest of the package needs.  Tolerance for all structural checks is 1e-12.
"""

from __future__ import annotations

import numpy as np

TOL = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)

# stacked (3, 2, 2) Pauli vector, index order (x, y, z)
SIGMA = np.stack([PAULI_X, PAULI_Y, PAULI_Z])


def as_unit_vector(v, tol: float = TOL) -> np.ndarray:
    """Return ``v`` as a float64 array of shape (3,), requiring unit norm.

    Raises ValueError when the squared norm deviates from 1 by more than
    ``tol``; use :func:`normalized` to build unit vectors from raw input.
    """
    n = np.asarray(v, dtype=float).reshape(3)
    if abs(float(n @ n) - 1.0) > tol:
        raise ValueError(f"not a unit vector: |v|^2 = {float(n @ n)!r}")
    return n


def normalized(v) -> np.ndarray:
    """Scale a nonzero 3-vector to unit length."""
    n = np.asarray(v, dtype=float).reshape(3)
    norm = float(np.sqrt(n @ n))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return n / norm


def pauli_dot(n) -> np.ndarray:
    """sigma . n for a unit vector n: Hermitian, traceless, squares to 1."""
    n = as_unit_vector(n)
    return n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the first factor indexes the slow (particle-1) side."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conjugate(np.asarray(a)).T


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def is_hermitian(a: np.ndarray, tol: float = TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_psd(a: np.ndarray, tol: float = TOL) -> bool:
    """Positive semidefinite within tol; requires a Hermitian input."""
    if not is_hermitian(a, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh(a)) >= -tol)


def eigenvalues_hermitian_2x2(a: np.ndarray, tol: float = TOL) -> tuple[float, float]:
    """Closed-form eigenvalues of a Hermitian 2x2 matrix, ascending.

    Uses t/2 +- sqrt((t/2)^2 - det) with t = trace; raises on
    non-Hermitian input.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    t = float(np.trace(a).real)
    det = float(np.linalg.det(a).real)
    # Hermitian guarantees a nonnegative discriminant up to rounding
    disc = max((t / 2.0) ** 2 - det, 0.0)
    root = float(np.sqrt(disc))
    return (t / 2.0 - root, t / 2.0 + root)


def partial_trace(rho4: np.ndarray, keep: int) -> np.ndarray:
    """Trace a 4x4 two-qubit operator down to the kept side (1 or 2)."""
    r = np.asarray(rho4, dtype=complex).reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ikjk->ij", r)
    if keep == 2:
        return np.einsum("kikj->ij", r)
    raise ValueError("keep must be 1 or 2")
