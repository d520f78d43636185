"""Dense complex linear algebra for small Hilbert spaces.

Matrices are plain ``numpy`` complex arrays in row-major order. Everything here
is a pure function of its inputs.
"""
from functools import reduce

import numpy as np

from hybridmem.errors import NumericalError

HERMITIAN_ATOL = 1e-12


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    return m


def kron(*ops):
    """Kronecker product of one or more matrices, left factor most significant."""
    return reduce(np.kron, (as_matrix(op) for op in ops))


def max_asymmetry(h):
    h = as_matrix(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def check_hermitian(h, atol=HERMITIAN_ATOL):
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NumericalError(f"matrix is not square: {h.shape}")
    asym = max_asymmetry(h)
    if asym > atol:
        raise NumericalError(f"matrix is not Hermitian: max |h - h^dag| = {asym:.3e} > {atol:.0e}")
    return h


def eig_hermitian(h):
    """Ascending eigenvalues and orthonormal eigenvector columns of a Hermitian matrix."""
    h = check_hermitian(h)
    return np.linalg.eigh(h)


def unitary_from_eig(evals, evecs, dt):
    return (evecs * np.exp(-1j * evals * dt)) @ evecs.conj().T


def unitary_from_hamiltonian(h, dt):
    """exp(-i h dt) through the spectral decomposition of h."""
    evals, evecs = eig_hermitian(h)
    return unitary_from_eig(evals, evecs, dt)


def dagger(a):
    return np.asarray(a).conj().T


def commutator(a, b):
    return a @ b - b @ a
