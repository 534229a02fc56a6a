"""Quantum channels in Kraus form and the texture-free operations.

A channel Phi(rho) = sum_n K_n rho K_n^H is texture-free when it fixes f1,
which for a pure free state is the same as every Kraus operator having
|f1> as an eigenvector: K_n |f1> = alpha_n |f1>.
"""

from dataclasses import dataclass, field

import numpy as np

from qtexture.exceptions import (
    ChannelConstructionError,
    DimensionError,
    TracePreservationError,
)
from qtexture.linalg import MAX_DIM, as_matrix, check_hermitian
from qtexture.states import (
    DensityMatrix,
    _check_dim,
    as_density,
    dft_rotation,
    free_vector,
    ginibre,
    random_f1_fixing_unitary,
    random_pure,
)

COMPLETENESS_TOL = 1e-9
TRACE_DRIFT_TOL = 1e-9
FREE_RESIDUAL_TOL = 1e-9
ZERO_ALPHA_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    kraus_ops: tuple
    labels: tuple = ()

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(k.shape != (d, d) for k in ops):
            raise DimensionError("Kraus operators must all be d x d with the same d")
        gram = sum(k.conj().T @ k for k in ops)
        err = float(np.max(np.abs(gram - np.eye(d))))
        if err > COMPLETENESS_TOL:
            raise TracePreservationError(f"Kraus operators are not complete: max|sum K^H K - I| = {err:.3e}")
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self):
        return self.kraus_ops[0].shape[0]

    def __len__(self):
        return len(self.kraus_ops)

    def __call__(self, rho):
        return apply(self, rho)


@dataclass(frozen=True)
class FreeOperationReport:
    """Verdict of :func:`is_texture_free` with per-Kraus diagnostics.

    ``annihilating`` lists the Kraus indices with alpha_n = 0, which the
    free-operation condition permits but which are worth flagging.
    """

    free: bool
    residuals: np.ndarray
    alphas: np.ndarray
    annihilating: tuple = field(default=())

    def __bool__(self):
        return self.free


def apply(channel, rho):
    """Phi(rho), with the output trace corrected only for rounding drift."""
    rho = as_density(rho)
    r = rho.data
    if r.shape[0] != channel.dim:
        raise DimensionError(f"state dim {r.shape[0]} does not match channel dim {channel.dim}")
    ks = np.stack(channel.kraus_ops)
    out = np.einsum("nij,jk,nlk->il", ks, r, ks.conj())
    out = 0.5 * (out + out.conj().T)
    tr = float(np.trace(out).real)
    if abs(tr - 1.0) > TRACE_DRIFT_TOL:
        raise TracePreservationError(f"channel output has trace {tr!r}")
    return DensityMatrix(out / tr, validate=False)


def is_texture_free(channel, tol=FREE_RESIDUAL_TOL):
    """Check K_n|f1> = alpha_n |f1> with alpha_n := <f1|K_n|f1>."""
    f = free_vector(channel.dim)
    residuals = []
    alphas = []
    for k in channel.kraus_ops:
        kf = k @ f
        alpha = np.vdot(f, kf)
        alphas.append(alpha)
        residuals.append(float(np.linalg.norm(kf - alpha * f)))
    residuals = np.array(residuals)
    alphas = np.array(alphas)
    annihilating = tuple(int(i) for i in np.flatnonzero(np.abs(alphas) <= ZERO_ALPHA_TOL))
    return FreeOperationReport(bool(np.all(residuals <= tol)), residuals, alphas, annihilating)


def identity_channel(d):
    return KrausChannel((np.eye(_check_dim(d), dtype=np.complex128),), ("identity",))


def unitary_channel(u, label="unitary"):
    return KrausChannel((as_matrix(u),), (label,))


def weyl_operators(d):
    """The d^2 clock-and-shift operators X^a Z^b."""
    d = _check_dim(d)
    x = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = []
    for a in range(d):
        xa = np.linalg.matrix_power(x, a)
        for b in range(d):
            ops.append(xa @ np.linalg.matrix_power(z, b))
    return ops


def depolarizing_channel(d):
    """The completely depolarizing channel rho -> I/d (not texture-free)."""
    ops = [w / d for w in weyl_operators(d)]
    return KrausChannel(tuple(ops), tuple(f"weyl{i}" for i in range(len(ops))))


def random_texture_free_unitary_mix(d, n_terms, rng):
    """Mixed-unitary channel sum_m p_m U_m rho U_m^H with f1-fixing U_m."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    p = rng.dirichlet(np.ones(n_terms)) if n_terms > 1 else np.ones(1)
    ops = tuple(np.sqrt(pm) * random_f1_fixing_unitary(d, rng) for pm in p)
    return KrausChannel(ops, tuple(f"unitary{m}" for m in range(n_terms)))


def random_texture_free_channel(d, env_dim, rng, *, max_dim=MAX_DIM, retries=3):
    """General texture-free channel from a random isometry.

    Builds V: C^d -> C^d (x) C^m with V|f1> = |f1> (x) |chi> for a Haar
    random environment vector chi, completing the remaining columns from
    random vectors orthogonal to |f1> (x) |chi>. The Kraus operators are
    K_n = (I (x) <n|) V, so K_n |f1> = chi_n |f1>.
    """
    d = _check_dim(d)
    m = int(env_dim)
    if m < 1:
        raise ValueError("environment dimension must be >= 1")
    if d * m > max_dim:
        raise DimensionError(f"d*m = {d * m} exceeds cap {max_dim}")
    chi = random_pure(m, rng)
    anchor = np.kron(free_vector(d), chi)
    for _ in range(retries):
        cols = np.column_stack([anchor, ginibre(d * m, d - 1, rng)])
        q, r = np.linalg.qr(cols)
        diag = np.diagonal(r)
        if np.min(np.abs(diag)) < 1e-8:
            continue
        w = q * (diag / np.abs(diag))
        # column 0 of w is |f1>(x)chi; rotate so it is the image of |f1>
        v = w @ dft_rotation(d).conj().T
        kraus = tuple(v[n::m, :] for n in range(m))
        return KrausChannel(kraus, tuple(f"env{n}" for n in range(m)))
    raise ChannelConstructionError(f"could not orthonormalize isometry columns after {retries} attempts")


def detexture(a):
    """Delta_T(A) = <f1|A|f1> f1 (not trace-preserving on general input)."""
    a = check_hermitian(a)
    d = a.shape[0]
    f = free_vector(d)
    coeff = np.vdot(f, a @ f).real
    return coeff * np.full((d, d), 1.0 / d, dtype=np.complex128)
