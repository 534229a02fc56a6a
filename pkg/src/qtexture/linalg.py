"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. The
functions here validate shape, finiteness and Hermiticity at the boundary
and otherwise stay out of the way.
"""

from typing import NamedTuple

import numpy as np

from qtexture import kernels
from qtexture.exceptions import (
    DimensionError,
    EigenSolverError,
    NonHermitianPairingError,
    NotHermitianError,
    NotPSDError,
    SingularPowerError,
)

MAX_DIM = 64
HERMITIAN_TOL = 1e-10
PSD_CHECK_TOL = 1e-8
PSD_CLAMP_REL = 1e-12
PAIRING_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m, *, square=True):
    """Coerce ``m`` to a finite complex128 2-D array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermiticity_error(m):
    a = np.asarray(m)
    return float(np.max(np.abs(a - a.conj().T)))


def check_hermitian(m, tol=HERMITIAN_TOL):
    """Return ``m`` as an array after checking max|M - M^H| <= tol."""
    a = as_matrix(m)
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max|M - M^H| = {err:.3e} > {tol:.1e}")
    return a


def eig_hermitian(m, *, check=True):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises:
        EigenSolverError: the eigensolver failed to converge. The error
            carries the dimension and a condition estimate.
    """
    a = check_hermitian(m) if check else as_matrix(m)
    try:
        w, v = kernels.eigh(a)
    except (np.linalg.LinAlgError, *kernels.not_converged_errors()) as exc:
        try:
            cond = float(np.linalg.cond(a))
        except np.linalg.LinAlgError:
            cond = float("inf")
        raise EigenSolverError(
            f"eigensolver did not converge (dim={a.shape[0]}, cond~{cond:.3e}): {exc}",
            dim=a.shape[0], condition=cond) from exc
    return EigenDecomposition(np.asarray(w, dtype=np.float64), v)


def _clamped(w, psd_tol):
    lam_max = float(np.max(w)) if w.size else 0.0
    scale = max(lam_max, 0.0)
    if w.size and w[0] < -psd_tol:
        raise NotPSDError(f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e}")
    cutoff = PSD_CLAMP_REL * scale
    return np.where(w < cutoff, 0.0, w), cutoff


def matrix_power_psd(m, p, *, psd_tol=PSD_CHECK_TOL):
    """Real power of a PSD matrix through its eigendecomposition.

    Eigenvalues below ``1e-12 * lambda_max`` are treated as exact zeros,
    so projectors are fixed by every positive power. Non-positive powers
    are only defined for non-singular input.
    """
    w, v = eig_hermitian(m)
    wc, _ = _clamped(w, psd_tol)
    nonzero = wc > 0.0
    if p <= 0 and not np.all(nonzero):
        raise SingularPowerError(f"power p={p} of a singular matrix is undefined")
    wp = np.zeros_like(wc)
    wp[nonzero] = wc[nonzero] ** p
    out = (v * wp) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def trace_norm(m):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = eig_hermitian(m)
    return float(np.sum(np.abs(w)))


def tensor(a, b, *, max_dim=MAX_DIM):
    """Kronecker product with a guard on the resulting dimension."""
    a = as_matrix(a, square=False)
    b = as_matrix(b, square=False)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionError(f"tensor product dimension {rows}x{cols} exceeds cap {max_dim}")
    return np.kron(a, b)


def expectation(m, rho):
    """Re Tr(M rho), refusing results with a non-negligible imaginary part."""
    m = np.asarray(m, dtype=np.complex128)
    rho = np.asarray(rho, dtype=np.complex128)
    if m.shape != rho.shape:
        raise DimensionError(f"dimension mismatch: {m.shape} vs {rho.shape}")
    val = np.einsum("ij,ji->", m, rho)
    if abs(val.imag) > PAIRING_TOL:
        raise NonHermitianPairingError(f"Tr(M rho) has imaginary part {val.imag:.3e}")
    return float(val.real)
