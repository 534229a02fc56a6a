"""Pure-Python (numpy) versions of the spectral kernels in ``_kernels.pyx``."""

import numpy as np


class JacobiNotConverged(ArithmeticError):
    pass


def eigh(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return w, v


def f1_spectrum(m):
    w, v = eigh(m)
    n = v.shape[0]
    weights = np.abs(v.sum(axis=0)) ** 2 / n
    return w, weights


def power_form(w, c, p, cutoff):
    w = np.asarray(w, dtype=np.float64)
    mask = w > cutoff
    return float(np.dot(np.asarray(c)[mask], w[mask] ** p))
