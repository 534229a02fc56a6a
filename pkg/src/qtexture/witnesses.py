"""Texture witnesses.

A Hermitian W is a texture witness when Tr(W f1) >= 0 and some state gives
Tr(W rho) < 0. The second condition is decided spectrally: it holds iff
lambda_min(W) < 0, since the ground-state projector is then detected and
cannot be f1.

Basis indices for the pairwise witnesses are 0-based and angles are in
radians.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qtexture.channels import detexture
from qtexture.exceptions import DimensionError, DomainError, WitnessError
from qtexture.linalg import check_hermitian, eig_hermitian, expectation
from qtexture.measures import t_fidelity
from qtexture.states import _check_dim, as_density, free_state, free_vector

DETECTION_TOL = 1e-10
CONDITION_TOL = 1e-10
THETA_MIN = math.pi / 4
THETA_MAX = 3 * math.pi / 4


@dataclass(frozen=True)
class Witness:
    """A certified texture witness.

    ``family`` is one of ``universal``, ``w1``, ``generator``, ``theta``,
    ``jk_phase`` or ``imaginarity``; ``params`` holds the family's
    parameters. The certificate (``free_expectation``, ``min_eigenvalue``)
    is computed at construction.
    """

    op: np.ndarray
    family: str
    params: dict = field(default_factory=dict)
    free_expectation: float = field(init=False)
    min_eigenvalue: float = field(init=False)
    threshold: Optional[float] = None

    def __post_init__(self):
        op = check_hermitian(self.op)
        op = 0.5 * (op + op.conj().T)
        op.setflags(write=False)
        object.__setattr__(self, "op", op)
        d = op.shape[0]
        object.__setattr__(self, "free_expectation", expectation(op, free_state(d).data))
        object.__setattr__(self, "min_eigenvalue", float(eig_hermitian(op, check=False).eigenvalues[0]))
        if self.free_expectation < -CONDITION_TOL:
            raise WitnessError(f"{self.family} witness violates Tr(W f1) >= 0: {self.free_expectation:.3e}")
        if self.min_eigenvalue >= -CONDITION_TOL:
            raise WitnessError(f"{self.family} operator detects no state: lambda_min = {self.min_eigenvalue:.3e}")

    @property
    def dim(self):
        return self.op.shape[0]

    def ground_state(self):
        """Projector onto the lowest eigenvector, the most strongly detected state."""
        _, v = eig_hermitian(self.op, check=False)
        psi = v[:, 0]
        return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class DetectionResult:
    expectation: float
    detected: bool
    witness_family: str
    boundary: bool = False
    derived_tf: Optional[float] = None


def universal_witness(a):
    """W = <f1|A|f1> f1 - A, which always has Tr(W f1) = 0.

    Raises:
        WitnessError: W has no negative eigenvalue (e.g. A proportional
            to f1), so it detects nothing.
    """
    a = check_hermitian(a)
    if a.shape[0] < 2:
        raise DimensionError("universal witnesses need d >= 2")
    op = detexture(a) - a
    try:
        return Witness(op, "universal", {"A": a})
    except WitnessError as exc:
        raise WitnessError(f"A = {np.array2string(a, precision=4)} is not a witness for any state: {exc}") from None


def witness_w1(d):
    """W1 = f1 - I; Tr(W1 rho) = -T_F(rho) for every state."""
    d = _check_dim(d)
    if d < 2:
        raise DimensionError("W1 needs d >= 2")
    return Witness(free_state(d).data - np.eye(d), "w1")


def generator_g(d):
    """G = 2 f1 - I: +1 on |f1>, -1 on its orthogonal complement."""
    d = _check_dim(d)
    return 2.0 * free_state(d).data - np.eye(d, dtype=np.complex128)


def _check_theta(theta):
    theta = float(theta)
    if not THETA_MIN < theta <= THETA_MAX:
        raise DomainError(f"theta must lie in (pi/4, 3pi/4], got {theta}")
    return theta


def theta_threshold(theta):
    """(cos t + sin t)/(2 sin t): W_theta detects rho iff T_F(rho) exceeds this."""
    theta = _check_theta(theta)
    return (math.cos(theta) + math.sin(theta)) / (2.0 * math.sin(theta))


def witness_theta(d, theta):
    """W_theta = cos(theta) I + sin(theta) G for theta in (pi/4, 3pi/4]."""
    theta = _check_theta(theta)
    d = _check_dim(d)
    op = math.cos(theta) * np.eye(d) + math.sin(theta) * generator_g(d)
    return Witness(op, "theta", {"theta": theta}, threshold=theta_threshold(theta))


def tf_from_theta(expectation_value, theta):
    """Recover T_F(rho) from Tr(W_theta rho)."""
    theta = float(theta)
    s = math.sin(theta)
    if s <= 0.0:
        raise DomainError(f"sin(theta) must be positive, got theta={theta}")
    _check_theta(theta)
    return (math.cos(theta) + s - expectation_value) / (2.0 * s)


def _check_pair(d, j, k):
    if not (0 <= j < d and 0 <= k < d):
        raise IndexError(f"indices ({j}, {k}) out of range for dimension {d}")
    if j == k:
        raise IndexError("j and k must differ")


def jk_operator(d, j, k, phi):
    """(2 cos(phi)/d) I - (e^{i phi}|j><k| + e^{-i phi}|k><j|), unchecked."""
    op = (2.0 * math.cos(phi) / d) * np.eye(d, dtype=np.complex128)
    op[j, k] -= np.exp(1j * phi)
    op[k, j] -= np.exp(-1j * phi)
    return op


def witness_jk(d, j, k, phi):
    """Pairwise phase witness W^{jk}_phi for phi in (0, 2 pi)."""
    d = _check_dim(d)
    _check_pair(d, j, k)
    phi = float(phi)
    if not 0.0 < phi < 2.0 * math.pi:
        raise DomainError(f"phi must lie in (0, 2pi), got {phi}")
    return Witness(jk_operator(d, j, k, phi), "jk_phase", {"j": j, "k": k, "phi": phi})


def canonical_jk_state(d, j, k, phi):
    """(|j> + e^{-i phi}|k>)/sqrt(2), whose coherence rho_jk is e^{i phi}/2.

    On this state W^{jk}_phi has expectation 2 cos(phi)/d - 1.
    """
    d = _check_dim(d)
    _check_pair(d, j, k)
    psi = np.zeros(d, dtype=np.complex128)
    psi[j] = 1.0
    psi[k] = np.exp(-1j * phi)
    psi /= math.sqrt(2.0)
    return np.outer(psi, psi.conj())


def imaginarity_witness(d, j, k, sign):
    """W^{jk}_{I+} = W^{jk}_{pi/2} or W^{jk}_{I-} = W^{jk}_{3pi/2}.

    Tr(W_{I+} s) = -2 Im s_jk and Tr(W_{I-} s) = +2 Im s_jk.
    """
    if sign in ("+", 1, +1):
        phi, tag = math.pi / 2, "+"
    elif sign in ("-", -1):
        phi, tag = 3 * math.pi / 2, "-"
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    d = _check_dim(d)
    _check_pair(d, j, k)
    return Witness(jk_operator(d, j, k, phi), "imaginarity", {"j": j, "k": k, "sign": tag})


def evaluate_witness(w, rho):
    """Tr(W rho) with a detection verdict.

    Values within 1e-10 of zero are reported undetected with ``boundary``
    set. For the W1 and W_theta families the fidelity texture T_F implied
    by the expectation is filled in.
    """
    rho = as_density(rho)
    if rho.dim != w.dim:
        raise DimensionError(f"witness dim {w.dim} does not match state dim {rho.dim}")
    val = expectation(w.op, rho.data)
    derived = None
    if w.family == "w1":
        derived = -val
    elif w.family == "theta":
        derived = tf_from_theta(val, w.params["theta"])
    return DetectionResult(
        expectation=val,
        detected=val < -DETECTION_TOL,
        witness_family=w.family,
        boundary=abs(val) <= DETECTION_TOL,
        derived_tf=derived,
    )


def free_overlap(op):
    """<f1|W|f1>, the quantity every universal-construction witness has equal to 0."""
    op = np.asarray(op, dtype=np.complex128)
    f = free_vector(op.shape[0])
    return float(np.vdot(f, op @ f).real)


def check_w1_identity(rho):
    """Tr(W1 rho) + T_F(rho); zero up to rounding."""
    rho = as_density(rho)
    return evaluate_witness(witness_w1(rho.dim), rho).expectation + float(t_fidelity(rho))
