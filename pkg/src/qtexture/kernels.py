"""Backend selection for the spectral kernels.

The compiled Jacobi kernels are used when the extension was built and
``QTEXTURE_PURE_PYTHON`` is unset; otherwise the numpy versions are used.
Matrices larger than ``JACOBI_MAX_DIM`` always go to LAPACK, where the
O(d^3) per-sweep cost of Jacobi stops paying for itself.
"""

import os

from qtexture import _pykernels

JACOBI_MAX_DIM = 8

_compiled = None
if not os.environ.get("QTEXTURE_PURE_PYTHON"):
    try:
        from qtexture import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _pick(m):
    if _compiled is not None and len(m) <= JACOBI_MAX_DIM:
        return _compiled
    return _pykernels


def eigh(m):
    return _pick(m).eigh(m)


def f1_spectrum(m):
    return _pick(m).f1_spectrum(m)


def power_form(w, c, p, cutoff):
    mod = _compiled if _compiled is not None else _pykernels
    return mod.power_form(w, c, float(p), float(cutoff))


def not_converged_errors():
    errs = [_pykernels.JacobiNotConverged]
    if _compiled is not None:
        errs.append(_compiled.JacobiNotConverged)
    return tuple(errs)
