"""Texture measures.

Every measure here vanishes exactly on the free state f1 and is built from
one of three primitives:

* the overlap <f1|rho|f1>,
* the spectral form <f1|rho^p|f1> = sum_i w_i lambda_i^p, where w_i are the
  weights of the eigenvectors of rho on |f1>,
* the trace norm of rho - f1, or the largest admissible weight of f1 inside
  rho.

Values are returned as :class:`MeasureValue`, which behaves as a float.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from qtexture import kernels
from qtexture.exceptions import DimensionError, DomainError
from qtexture.linalg import (
    PSD_CLAMP_REL,
    eig_hermitian,
    matrix_power_psd,
    trace_norm,
)
from qtexture.states import as_density, free_state, free_vector

DIVERGENCE_FLOOR = 1e-300
RANK_TOL_REL = 1e-10
RANGE_TOL = 1e-8
BISECTION_FEASIBILITY_TOL = 1e-12
BISECTION_STEPS = 60
INNER_NOISE_FLOOR = 1e-15


@dataclass(frozen=True)
class AlphaZParams:
    """Parameters of the alpha-z family: 0 < alpha < 1, z >= max(alpha, 1 - alpha)."""

    alpha: float
    z: float

    def __post_init__(self):
        a, z = float(self.alpha), float(self.z)
        if not 0.0 < a < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {a}")
        if z < max(a, 1.0 - a):
            raise DomainError(f"z must be >= max(alpha, 1 - alpha) = {max(a, 1.0 - a)}, got z={z}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "z", z)

    @property
    def exponent(self):
        """The power (1 - alpha)/z applied to rho."""
        return (1.0 - self.alpha) / self.z


@dataclass(frozen=True)
class MeasureValue:
    value: float
    measure_id: str
    params: Optional[dict] = None
    divergent: bool = False
    log_base: Optional[str] = None

    def __float__(self):
        return self.value

    def __repr__(self):
        p = "" if not self.params else ", " + ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"MeasureValue({self.measure_id}{p}: {self.value!r})"


def _params(alpha, z=None):
    if isinstance(alpha, AlphaZParams):
        return alpha
    return AlphaZParams(alpha, z)


def overlap(rho):
    """<f1|rho|f1>, the mean of all matrix entries of rho."""
    rho = as_density(rho)
    return float(np.sum(rho.data).real) / rho.dim


def free_power_form(rho, p):
    """<f1|rho^p|f1> evaluated on the spectrum, zero eigenvalues clamped."""
    rho = as_density(rho)
    w, c = rho.spectrum
    cutoff = PSD_CLAMP_REL * max(float(w[-1]), 0.0)
    return kernels.power_form(np.ascontiguousarray(w), np.ascontiguousarray(c), p, cutoff)


def f_alpha_z(rho, alpha, z=None):
    """(<f1|rho^{(1-alpha)/z}|f1>)^z.

    This is the alpha-z trace functional f(f1||rho) after the projector f1
    has been pulled out of the sandwich.
    """
    p = _params(alpha, z)
    return free_power_form(rho, p.exponent) ** p.z


def f_alpha_z_trace_form(rho, alpha, z=None):
    """Tr(rho^{(1-alpha)/2z} f1^{alpha/z} rho^{(1-alpha)/2z})^z, computed with full matrices."""
    p = _params(alpha, z)
    rho = as_density(rho)
    half = matrix_power_psd(rho.data, p.exponent / 2.0)
    f1_pow = matrix_power_psd(free_state(rho.dim).data, p.alpha / p.z)
    inner = half @ f1_pow @ half
    return float(np.trace(matrix_power_psd(0.5 * (inner + inner.conj().T), p.z)).real)


def t_gr(rho, alpha, z=None):
    """T^GR_{alpha,z}(rho) = 1 - f_{alpha,z}(f1||rho)."""
    p = _params(alpha, z)
    val = 1.0 - f_alpha_z(rho, p)
    return MeasureValue(val, "tGR", {"alpha": p.alpha, "z": p.z})


def t_rugosity(rho):
    """State rugosity -ln<f1|rho|f1>; +inf when rho has no support on |f1>."""
    x = overlap(rho)
    if x <= DIVERGENCE_FLOOR:
        return MeasureValue(math.inf, "tSR", divergent=True, log_base="e")
    return MeasureValue(0.0 - math.log(x), "tSR", log_base="e")


def t_fidelity(rho):
    return MeasureValue(1.0 - overlap(rho), "tF")


def t_trace(rho):
    """Half the trace norm of rho - f1."""
    rho = as_density(rho)
    return MeasureValue(0.5 * trace_norm(rho.data - free_state(rho.dim).data), "tTr")


def weight_lambda(rho):
    """Largest lambda >= 0 with rho - lambda f1 PSD, via the pseudoinverse.

    ``rho - lambda |v><v|`` stays PSD iff v lies in the range of rho and
    lambda <= 1/<v|rho^+|v>.
    """
    rho = as_density(rho)
    w, v = rho.eig
    f = free_vector(rho.dim)
    keep = w > RANK_TOL_REL * max(float(w[-1]), 0.0)
    vk = v[:, keep]
    coeffs = vk.conj().T @ f
    if np.linalg.norm(f - vk @ coeffs) > RANGE_TOL:
        return 0.0
    inv_form = float(np.sum(np.abs(coeffs) ** 2 / w[keep]))
    return min(1.0, 1.0 / inv_form)


def weight_lambda_bisection(rho, steps=BISECTION_STEPS, tol=BISECTION_FEASIBILITY_TOL):
    """Independent check of :func:`weight_lambda` by bisection on feasibility."""
    rho = as_density(rho)
    f1 = free_state(rho.dim).data
    r = rho.data

    def feasible(lam):
        return eig_hermitian(r - lam * f1, check=False).eigenvalues[0] >= -tol

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def t_weight(rho):
    """Smallest s with rho = (1 - s) f1 + s tau for some state tau."""
    return MeasureValue(1.0 - weight_lambda(rho), "tW")


def t_weight_bisection(rho):
    return MeasureValue(1.0 - weight_lambda_bisection(rho), "tW_bisect")


def _check_renyi_alpha(alpha):
    alpha = float(alpha)
    if not 0.5 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [1/2, 1), got {alpha}")
    return alpha


def t_renyi(rho, alpha):
    """Sandwiched-Renyi texture measure [1 - x^{alpha/(1-alpha)}]/(1 - alpha).

    Here x = <f1|rho^{(1-alpha)/alpha}|f1>; at alpha = 1/2 this is 2 T_F.
    """
    alpha = _check_renyi_alpha(alpha)
    x = free_power_form(rho, (1.0 - alpha) / alpha)
    val = (1.0 - x ** (alpha / (1.0 - alpha))) / (1.0 - alpha)
    return MeasureValue(val, "tR", {"alpha": alpha})


def t_renyi_matrix(rho, alpha):
    """Same as :func:`t_renyi` but through an explicit matrix power."""
    alpha = _check_renyi_alpha(alpha)
    rho = as_density(rho)
    f = free_vector(rho.dim)
    x = float(np.vdot(f, matrix_power_psd(rho.data, (1.0 - alpha) / alpha) @ f).real)
    return MeasureValue((1.0 - x ** (alpha / (1.0 - alpha))) / (1.0 - alpha), "tR", {"alpha": alpha})


def t_bures(rho):
    """Bures-distance texture 2(1 - sqrt<f1|rho|f1>) = 2 T^GR_{1/2,1/2}."""
    return MeasureValue(2.0 * (1.0 - math.sqrt(max(overlap(rho), 0.0))), "tBures")


def t_tsallis(rho, mu):
    """Tsallis texture T^GR_{1-mu,1}(rho) / (1 - mu), i.e. (1 - <f1|rho^mu|f1>)/(1 - mu)."""
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    gr = 1.0 - f_alpha_z(rho, AlphaZParams(1.0 - mu, 1.0))
    return MeasureValue(gr / (1.0 - mu), "tTsallis", {"mu": mu})


def d_alpha_z(tau, sigma, alpha, z=None):
    """alpha-z Renyi relative entropy D(tau||sigma) in bits.

    Uses Tr(tau^{alpha/2z} sigma^{(1-alpha)/z} tau^{alpha/2z})^z and returns
    +inf when that trace functional vanishes.
    """
    p = _params(alpha, z)
    tau = as_density(tau)
    sigma = as_density(sigma)
    if tau.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch: {tau.dim} vs {sigma.dim}")
    half = matrix_power_psd(tau.data, p.alpha / (2.0 * p.z))
    mid = matrix_power_psd(sigma.data, p.exponent)
    inner = half @ mid @ half
    w = eig_hermitian(0.5 * (inner + inner.conj().T), check=False).eigenvalues
    # inner has unit-scale factors, so eigenvalues near eps are rounding residue
    w = np.where(w > INNER_NOISE_FLOOR, w, 0.0)
    f = float(np.sum(w ** p.z))
    if f <= DIVERGENCE_FLOOR:
        return math.inf
    return math.log2(f) / (p.alpha - 1.0)


def purity(rho):
    """Tr rho^2. Not a texture measure; used as a harness control."""
    return MeasureValue(as_density(rho).purity, "purity")


# (measure id, parameter names) accepted by the command line and the harness.
MEASURE_IDS = {
    "tGR": ("alpha", "z"),
    "tSR": (),
    "tF": (),
    "tTr": (),
    "tW": (),
    "tR": ("alpha",),
    "tBures": (),
    "tTsallis": ("mu",),
}


def evaluate(measure_id, rho, **params):
    """Evaluate a measure by id, e.g. ``evaluate("tGR", rho, alpha=0.5, z=1)``."""
    if measure_id not in MEASURE_IDS:
        raise KeyError(f"unknown measure {measure_id!r}; choose from {sorted(MEASURE_IDS)}")
    expected = MEASURE_IDS[measure_id]
    missing = [k for k in expected if k not in params]
    extra = [k for k in params if k not in expected]
    if missing or extra:
        raise DomainError(f"{measure_id} takes parameters {expected}; missing {missing}, unexpected {extra}")
    fn = {
        "tGR": lambda r: t_gr(r, params["alpha"], params["z"]),
        "tSR": t_rugosity,
        "tF": t_fidelity,
        "tTr": t_trace,
        "tW": t_weight,
        "tR": lambda r: t_renyi(r, params["alpha"]),
        "tBures": t_bures,
        "tTsallis": lambda r: t_tsallis(r, params["mu"]),
    }[measure_id]
    return fn(rho)
