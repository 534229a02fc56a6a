# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled spectral kernels for small dense Hermitian matrices.

The harness evaluates thousands of eigendecompositions of matrices with
d <= 8; at that size LAPACK call overhead dominates, so a cyclic complex
Jacobi sweep over raw row-major buffers is competitive.
"""

import numpy as np
cimport numpy as cnp

from libc.math cimport sqrt, fabs, hypot, pow

cnp.import_array()

ctypedef double complex cplx

cdef double EPS = 2.220446049250313e-16
cdef int MAX_SWEEPS = 60


class JacobiNotConverged(ArithmeticError):
    pass


cdef inline cplx cconj(cplx z) noexcept nogil:
    cdef cplx r
    r.real = z.real
    r.imag = -z.imag
    return r


cdef int _jacobi(cplx* a, cplx* v, Py_ssize_t n) noexcept nogil:
    """In-place cyclic Jacobi on row-major ``a``; ``v`` accumulates rotations.

    Returns the number of sweeps, or -1 if MAX_SWEEPS was exhausted.
    """
    cdef Py_ssize_t p, q, k
    cdef int sweep, rotated
    cdef double fro = 0.0, mag, app, aqq, theta, t, c, s, floor_abs
    cdef double er, ei
    cdef cplx x, y, apk, aqk
    cdef cplx uqp, uqq

    for k in range(n * n):
        fro += a[k].real * a[k].real + a[k].imag * a[k].imag
    fro = sqrt(fro)
    if fro == 0.0:
        return 0
    floor_abs = 1e-18 * fro

    for sweep in range(MAX_SWEEPS):
        rotated = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = hypot(a[p * n + q].real, a[p * n + q].imag)
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                if mag <= floor_abs or mag <= EPS * sqrt(fabs(app * aqq)):
                    a[p * n + q] = 0.0
                    a[q * n + p] = 0.0
                    continue
                rotated += 1
                # phase of a_pq; conj(e) rotates column q so a_pq becomes real
                er = a[p * n + q].real / mag
                ei = -a[p * n + q].imag / mag
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                # U restricted to (p, q): [[c, s], [-s e*, c e*]]
                uqp.real = -s * er
                uqp.imag = -s * ei
                uqq.real = c * er
                uqq.imag = c * ei
                for k in range(n):
                    x = a[k * n + p]
                    y = a[k * n + q]
                    a[k * n + p] = c * x + y * uqp
                    a[k * n + q] = s * x + y * uqq
                for k in range(n):
                    apk = a[p * n + k]
                    aqk = a[q * n + k]
                    a[p * n + k] = c * apk + cconj(uqp) * aqk
                    a[q * n + k] = s * apk + cconj(uqq) * aqk
                for k in range(n):
                    x = v[k * n + p]
                    y = v[k * n + q]
                    v[k * n + p] = c * x + y * uqp
                    v[k * n + q] = s * x + y * uqq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p].imag = 0.0
                a[q * n + q].imag = 0.0
        if rotated == 0:
            return sweep + 1
    return -1


cdef tuple _decompose(m):
    cdef cnp.ndarray arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {np.shape(m)}")
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray a_np = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray v_np = np.zeros((n, n), dtype=np.complex128)
    cdef const cplx[:, :] src = arr
    cdef cplx* a = <cplx*> cnp.PyArray_DATA(a_np)
    cdef cplx* v = <cplx*> cnp.PyArray_DATA(v_np)
    cdef Py_ssize_t i, j
    cdef int sweeps
    with nogil:
        for i in range(n):
            v[i * n + i] = 1.0
            for j in range(n):
                a[i * n + j] = 0.5 * (src[i, j] + cconj(src[j, i]))
        sweeps = _jacobi(a, v, n)
    if sweeps < 0:
        raise JacobiNotConverged(
            f"Jacobi did not converge in {MAX_SWEEPS} sweeps (dim={n})")
    return a_np, v_np, sweeps


def eigh(m):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized as (M + M^H)/2 first. Returns ``(w, V)`` with
    ``w`` ascending and the columns of ``V`` the matching eigenvectors.
    """
    a_np, v_np, _ = _decompose(m)
    w = a_np.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v_np[:, order]


def f1_spectrum(m):
    """Ascending eigenvalues of ``m`` and the weights |<f1|v_i>|^2."""
    a_np, v_np, _ = _decompose(m)
    cdef Py_ssize_t n = a_np.shape[0]
    cdef cplx* a = <cplx*> cnp.PyArray_DATA(a_np)
    cdef cplx* v = <cplx*> cnp.PyArray_DATA(v_np)
    w_np = np.empty(n, dtype=np.float64)
    c_np = np.empty(n, dtype=np.float64)
    cdef double[::1] w = w_np
    cdef double[::1] c = c_np
    cdef Py_ssize_t i, j
    cdef double re, im
    for i in range(n):
        w[i] = a[i * n + i].real
        re = 0.0
        im = 0.0
        for j in range(n):
            re += v[j * n + i].real
            im += v[j * n + i].imag
        c[i] = (re * re + im * im) / n
    order = np.argsort(w_np, kind="stable")
    return w_np[order], c_np[order]


def power_form(const double[::1] w, const double[::1] c, double p, double cutoff):
    """Sum of c_i * w_i**p over eigenvalues strictly above ``cutoff``."""
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(w.shape[0]):
        if w[i] > cutoff:
            acc += c[i] * pow(w[i], p)
    return acc


def jacobi_sweeps(m):
    """Number of sweeps the Jacobi iteration needs for ``m`` (diagnostics)."""
    return _decompose(m)[2]
