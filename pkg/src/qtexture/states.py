"""Density matrices, the free state f1 and the random ensembles.

Basis indices are 0-based throughout: ``basis_state(d, 0)`` is the first
computational basis vector.

Randomness comes from :class:`numpy.random.Generator` backed by PCG64;
:func:`make_rng` is the only constructor used by the rest of the package.
"""

from functools import cached_property

import numpy as np

from qtexture import kernels
from qtexture.exceptions import DimensionError, NotDensityMatrixError
from qtexture.linalg import (
    MAX_DIM,
    EigenDecomposition,
    check_hermitian,
    eig_hermitian,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12


def make_rng(seed):
    """PCG64 generator. ``seed`` may be an int or a sequence of ints."""
    return np.random.Generator(np.random.PCG64(seed))


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise DimensionError(f"dimension {d} exceeds cap {MAX_DIM}")
    return int(d)


class DensityMatrix:
    """A validated density matrix with a cached eigendecomposition.

    Every measure needs the spectrum of the state and the weights
    |<f1|v_i>|^2 of its eigenvectors on the free vector; both are computed
    once per instance.
    """

    def __init__(self, data, *, validate=True, trace_tol=TRACE_TOL, psd_tol=PSD_TOL):
        if validate:
            a = check_hermitian(data)
        else:
            a = np.asarray(data, dtype=np.complex128)
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self._data = a
        if validate:
            tr = float(np.trace(a).real)
            if abs(tr - 1.0) > trace_tol:
                raise NotDensityMatrixError(f"trace is {tr!r}, expected 1")
            lam_min = float(self.spectrum[0][0])
            if lam_min < -psd_tol:
                raise NotDensityMatrixError(f"not positive semidefinite: min eigenvalue {lam_min:.3e}")

    @property
    def data(self):
        return self._data

    @property
    def dim(self):
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"

    @cached_property
    def spectrum(self):
        """Ascending eigenvalues and their weights on |f1>."""
        return kernels.f1_spectrum(self._data)

    @cached_property
    def eig(self):
        return eig_hermitian(self._data, check=False)

    @property
    def purity(self):
        return float(np.real(np.vdot(self._data, self._data)))


def as_density(rho, **kwargs):
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho, **kwargs)


def free_vector(d):
    d = _check_dim(d)
    return np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)


def free_state(d):
    """The texture-free state f1 = |f1><f1|; every entry equals 1/d."""
    d = _check_dim(d)
    return DensityMatrix(np.full((d, d), 1.0 / d, dtype=np.complex128), validate=False)


def basis_state(d, j):
    d = _check_dim(d)
    if not 0 <= j < d:
        raise IndexError(f"basis index {j} out of range for dimension {d}")
    psi = np.zeros(d, dtype=np.complex128)
    psi[j] = 1.0
    return psi


def pure_density(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise NotDensityMatrixError(f"state vector has norm {norm!r}")
    return DensityMatrix(np.outer(psi, psi.conj()), validate=False)


def maximally_mixed(d):
    d = _check_dim(d)
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d, validate=False)


def ginibre(rows, cols, rng):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_pure(d, rng):
    """Haar-random unit vector: normalized i.i.d. complex Gaussian entries."""
    d = _check_dim(d)
    psi = ginibre(d, 1, rng)[:, 0]
    return psi / np.linalg.norm(psi)


def random_mixed(d, rank, rng):
    """G G^H / Tr(G G^H) for a d x rank complex Ginibre matrix G."""
    d = _check_dim(d)
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    g = ginibre(d, rank, rng)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho, validate=False)


def haar_unitary(n, rng):
    """Haar-random n x n unitary (QR of a Ginibre matrix, phases fixed)."""
    q, r = np.linalg.qr(ginibre(n, n, rng))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def dft_rotation(d):
    """Unitary DFT matrix R_jk = exp(2 pi i jk / d) / sqrt(d).

    Column 0 is |f1>, so R maps |0> to the free vector.
    """
    d = _check_dim(d)
    jk = np.outer(np.arange(d), np.arange(d))
    return np.exp(2j * np.pi * jk / d) / np.sqrt(d)


def random_f1_fixing_unitary(d, rng):
    """U = R (e^{i theta} + V) R^H with V Haar on the complement of |f1>.

    ``U |f1> = e^{i theta} |f1>`` holds by construction, so U f1 U^H = f1.
    """
    d = _check_dim(d)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    block = np.zeros((d, d), dtype=np.complex128)
    block[0, 0] = np.exp(1j * theta)
    if d > 1:
        block[1:, 1:] = haar_unitary(d - 1, rng)
    r = dft_rotation(d)
    return r @ block @ r.conj().T


def is_density_matrix(rho, tol=TRACE_TOL):
    try:
        DensityMatrix(rho, trace_tol=tol, psd_tol=tol)
    except (NotDensityMatrixError, ValueError):
        return False
    return True


__all__ = [
    "DensityMatrix", "EigenDecomposition", "as_density", "basis_state", "dft_rotation",
    "free_state", "free_vector", "haar_unitary", "is_density_matrix", "make_rng",
    "maximally_mixed", "pure_density", "random_f1_fixing_unitary", "random_mixed",
    "random_pure",
]
