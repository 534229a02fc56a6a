"""Seeded property-verification suites.

Each suite samples states, free channels, f1-fixing unitaries and witness
parameters, checks the corresponding invariants and returns a
:class:`PropertyReport`. The RNG stream of every sample is derived from
``(seed, suite, dim, sample index)`` so reports depend only on the config.

Tolerances: inequalities get a slack of ``cfg.tolerance`` (default 1e-9).
Identity checks have their own pinned tolerances (1e-12, 1e-10, 1e-8),
which are scaled by ``cfg.tolerance / 1e-9`` so that tightening the
tolerance tightens every check.
"""

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from qtexture import kernels
from qtexture.channels import apply, random_texture_free_channel, random_texture_free_unitary_mix
from qtexture.exceptions import WitnessError
from qtexture.linalg import MAX_DIM, tensor
from qtexture.measures import (
    AlphaZParams,
    f_alpha_z,
    f_alpha_z_trace_form,
    purity,
    t_bures,
    t_fidelity,
    t_gr,
    t_renyi,
    t_rugosity,
    t_trace,
    t_tsallis,
    t_weight,
    t_weight_bisection,
)
from qtexture.states import (
    DensityMatrix,
    basis_state,
    free_state,
    make_rng,
    maximally_mixed,
    pure_density,
    random_f1_fixing_unitary,
    random_mixed,
)
from qtexture.witnesses import (
    canonical_jk_state,
    evaluate_witness,
    free_overlap,
    imaginarity_witness,
    theta_threshold,
    universal_witness,
    witness_jk,
    witness_theta,
    witness_w1,
)

DEFAULT_TOL = 1e-9
MAX_RECORDED_VIOLATIONS = 25
_SUITE_TAGS = {"axioms": 1, "propositions": 2, "witnesses": 3}


@dataclass
class SuiteConfig:
    """Sampling configuration shared by all suites.

    ``z_grid`` lists the extra z values; the boundary z = max(alpha,
    1 - alpha) is always included for each alpha, and z values below it
    are dropped.
    """

    dims: list = field(default_factory=lambda: [2, 3, 4, 5, 6])
    samples_per_dim: int = 200
    seed: int = 42
    tolerance: float = DEFAULT_TOL
    alpha_grid: list = field(default_factory=lambda: [round(0.1 * i, 1) for i in range(1, 10)])
    z_grid: list = field(default_factory=lambda: [0.75, 1.0, 1.5, 2.0])
    theta_grid: list = field(default_factory=lambda: [0.8, 1.0, 1.2, math.pi / 2, 1.8, 2.0, 2.2, 3 * math.pi / 4])
    mu_grid: list = field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])
    skip_infinite: bool = True
    max_dim: int = MAX_DIM
    max_tensor_dim: int = 36

    def __post_init__(self):
        self.dims = [int(d) for d in self.dims]
        bad = [d for d in self.dims if not 2 <= d <= self.max_dim]
        if bad:
            raise ValueError(f"dims must lie in [2, {self.max_dim}], got {bad}")
        if self.samples_per_dim < 1:
            raise ValueError("samples_per_dim must be >= 1")
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be non-negative")

    @property
    def tol_factor(self):
        return self.tolerance / DEFAULT_TOL

    def gr_params(self):
        out = []
        for a in self.alpha_grid:
            if not 0.0 < a < 1.0:
                continue
            zmin = max(a, 1.0 - a)
            zs = sorted({zmin, *(z for z in self.z_grid if z >= zmin)})
            out.extend(AlphaZParams(a, z) for z in zs)
        return out

    def renyi_alphas(self):
        return sorted(a for a in self.alpha_grid if 0.5 <= a < 1.0)

    def diagonal_alphas(self):
        return self.renyi_alphas()


@dataclass
class Violation:
    property_id: str
    dim: int
    sample: object
    lhs: float
    rhs: float
    slack: float
    params: dict = field(default_factory=dict)


@dataclass
class PropertyReport:
    suite_id: str
    config: dict
    checks_run: int
    skipped: int
    violations: list
    worst_slack: Optional[float]
    passed: bool
    properties: dict
    warnings: list
    backend: str = kernels.BACKEND

    def to_dict(self):
        return _jsonable(asdict(self))

    def violation_count(self, prefix=""):
        return sum(v["violations"] for k, v in self.properties.items() if k.startswith(prefix))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Recorder:
    """Accumulates checks, per-property tallies and capped violation records."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.checks = 0
        self.skipped = 0
        self.violations = []
        self.worst = None
        self.props = {}

    def _tally(self, key):
        if key not in self.props:
            self.props[key] = {"checks": 0, "violations": 0, "skipped": 0, "worst_slack": None}
        return self.props[key]

    def skip(self, pid, label=""):
        key = f"{pid}:{label}" if label else pid
        self._tally(key)["skipped"] += 1
        self.skipped += 1

    def _record(self, pid, label, ok, lhs, rhs, slack, dim, sample, params):
        key = f"{pid}:{label}" if label else pid
        t = self._tally(key)
        t["checks"] += 1
        self.checks += 1
        if t["worst_slack"] is None or slack < t["worst_slack"]:
            t["worst_slack"] = slack
        if self.worst is None or slack < self.worst:
            self.worst = slack
        if not ok:
            t["violations"] += 1
            if t["violations"] <= MAX_RECORDED_VIOLATIONS:
                self.violations.append(Violation(pid, dim, sample, lhs, rhs, slack, dict(params)))

    def leq(self, pid, lhs, rhs, tol, *, dim, sample, label="", **params):
        """Check lhs <= rhs + tol."""
        lhs, rhs = float(lhs), float(rhs)
        if math.isinf(lhs) or math.isinf(rhs):
            if self.cfg.skip_infinite:
                self.skip(pid, label)
                return True
            ok = lhs <= rhs
            slack = math.inf if ok else -math.inf
        else:
            slack = rhs + tol - lhs
            ok = slack >= 0.0
        self._record(pid, label, ok, lhs, rhs, slack, dim, sample, params)
        return ok

    def close(self, pid, lhs, rhs, tol, *, dim, sample, label="", **params):
        """Check |lhs - rhs| <= tol."""
        lhs, rhs = float(lhs), float(rhs)
        slack = tol - abs(lhs - rhs)
        ok = slack >= 0.0
        if math.isnan(slack):
            ok, slack = False, -math.inf
        self._record(pid, label, ok, lhs, rhs, slack, dim, sample, params)
        return ok

    def flag(self, pid, ok, lhs, rhs, *, dim, sample, label="", **params):
        """Record a boolean check; slack is +1 on success and -1 on failure."""
        self._record(pid, label, bool(ok), lhs, rhs, 1.0 if ok else -1.0, dim, sample, params)
        return ok

    def report(self, suite_id, warnings=()):
        warnings = list(warnings)
        if self.checks == 0:
            warnings.append("no checks were run (empty configuration); pass is vacuous")
        return PropertyReport(
            suite_id=suite_id,
            config=_jsonable(asdict(self.cfg)),
            checks_run=self.checks,
            skipped=self.skipped,
            violations=[asdict(v) for v in self.violations],
            worst_slack=self.worst,
            passed=not self.violations,
            properties=dict(sorted(self.props.items())),
            warnings=warnings,
        )


def sample_rng(cfg, suite, dim, index):
    return make_rng([int(cfg.seed), _SUITE_TAGS[suite], int(dim), int(index)])


def _random_state(d, rng):
    return random_mixed(d, int(rng.integers(1, d + 1)), rng)


def _mix(p, rho1, rho2):
    return DensityMatrix(p * rho1.data + (1.0 - p) * rho2.data, validate=False)


@dataclass(frozen=True)
class MeasureSpec:
    label: str
    fn: Callable


def axiom_measures(cfg):
    """The measures whose axioms are checked: T^GR grid, T_SR, T_F, T_Tr, T_w, T^R grid."""
    specs = [MeasureSpec(f"tGR(alpha={p.alpha},z={p.z})", lambda r, p=p: float(t_gr(r, p)))
             for p in cfg.gr_params()]
    specs += [
        MeasureSpec("tSR", lambda r: float(t_rugosity(r))),
        MeasureSpec("tF", lambda r: float(t_fidelity(r))),
        MeasureSpec("tTr", lambda r: float(t_trace(r))),
        MeasureSpec("tW", lambda r: float(t_weight(r))),
    ]
    specs += [MeasureSpec(f"tR(alpha={a})", lambda r, a=a: float(t_renyi(r, a)))
              for a in cfg.renyi_alphas()]
    return specs


def purity_control():
    """Tr rho^2 posing as a texture measure; it must fail monotonicity."""
    return [MeasureSpec("purity", lambda r: float(purity(r)))]


def run_axiom_suite(cfg, measures=None):
    """Non-negativity, monotonicity under free channels, and convexity."""
    measures = axiom_measures(cfg) if measures is None else measures
    rec = _Recorder(cfg)
    tol = cfg.tolerance
    tol_zero = 1e-10 * cfg.tol_factor
    for d in cfg.dims:
        f1 = free_state(d)
        for m in measures:
            rec.close("T1_free_zero", m.fn(f1), 0.0, tol_zero, dim=d, sample="f1", label=m.label)
        for i in range(cfg.samples_per_dim):
            rng = sample_rng(cfg, "axioms", d, i)
            rho1 = _random_state(d, rng)
            rho2 = _random_state(d, rng)
            p = float(rng.uniform())
            mix = _mix(p, rho1, rho2)
            chan_u = random_texture_free_unitary_mix(d, int(rng.integers(1, 4)), rng)
            env = int(rng.integers(1, min(3, cfg.max_dim // d) + 1))
            chan_g = random_texture_free_channel(d, env, rng, max_dim=cfg.max_dim)
            out_u = apply(chan_u, rho1)
            out_g = apply(chan_g, rho1)
            for m in measures:
                v1 = m.fn(rho1)
                v2 = m.fn(rho2)
                rec.leq("T1_nonneg", 0.0, v1, tol_zero, dim=d, sample=i, label=m.label)
                rec.leq("T2_monotone", m.fn(out_u), v1, tol, dim=d, sample=i, label=m.label,
                        channel="unitary_mix", n_terms=len(chan_u))
                rec.leq("T2_monotone", m.fn(out_g), v1, tol, dim=d, sample=i, label=m.label,
                        channel="isometry", env_dim=env)
                if math.isinf(v1) or math.isinf(v2):
                    rhs = math.inf
                else:
                    rhs = p * v1 + (1.0 - p) * v2
                rec.leq("T3_convex", m.fn(mix), rhs, tol, dim=d, sample=i, label=m.label, p=p)
    return rec.report("axioms")


def _anchor_states(d):
    minus = np.zeros(d, dtype=np.complex128)
    minus[0], minus[1] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    eps = 1e-3
    near = (1 - eps) * free_state(d).data + eps * np.eye(d) / d
    return [
        ("anchor:f1", free_state(d)),
        ("anchor:basis0", pure_density(basis_state(d, 0))),
        ("anchor:maximally_mixed", maximally_mixed(d)),
        ("anchor:near_f1", DensityMatrix(near, validate=False)),
        ("anchor:orthogonal", pure_density(minus)),
    ]


def _proposition_checks(rec, cfg, d, label, rho, rng, partner):
    tol = cfg.tolerance
    tf = cfg.tol_factor
    grid = cfg.gr_params()
    gr = {p: float(t_gr(rho, p)) for p in grid}

    by_alpha = {}
    for p in grid:
        by_alpha.setdefault(p.alpha, []).append(p)
    for a, ps in by_alpha.items():
        for p1, p2 in combinations(sorted(ps, key=lambda q: q.z), 2):
            rec.leq("prop1_2_z_monotone", gr[p1], gr[p2], tol, dim=d, sample=label,
                    alpha=a, z1=p1.z, z2=p2.z)

    diag = {a: float(t_gr(rho, AlphaZParams(a, a))) for a in cfg.diagonal_alphas()}
    for a1, a2 in combinations(sorted(diag), 2):
        rec.leq("prop1_1_diagonal", diag[a1], diag[a2], tol, dim=d, sample=label, alpha1=a1, alpha2=a2)

    u = random_f1_fixing_unitary(d, rng)
    rotated = DensityMatrix(u @ rho.data @ u.conj().T, validate=False)
    for p in grid:
        rec.close("prop2_unitary_invariance", float(t_gr(rotated, p)), gr[p], tol, dim=d, sample=label,
                  alpha=p.alpha, z=p.z)

    if partner is not None:
        delta = partner
        prod = DensityMatrix(tensor(rho.data, delta.data, max_dim=cfg.max_tensor_dim), validate=False)
        for p in grid:
            tr_, td, tp = gr[p], float(t_gr(delta, p)), float(t_gr(prod, p))
            rec.leq("prop3_subadditive", tp, tr_ + td, tol, dim=d, sample=label,
                    alpha=p.alpha, z=p.z, partner_dim=delta.dim)
            rec.leq("prop3_supermultiplicative", tr_ * td, tp, tol, dim=d, sample=label,
                    alpha=p.alpha, z=p.z, partner_dim=delta.dim)

    t_f = float(t_fidelity(rho))
    t_sr = float(t_rugosity(rho))
    t_tr = float(t_trace(rho))
    t_w = float(t_weight(rho))
    rec.leq("prop4_fidelity_rugosity", t_f, t_sr, tol, dim=d, sample=label)
    rec.leq("prop5_lower", 1.0 - math.sqrt(max(0.0, 1.0 - t_f)), t_tr, tol, dim=d, sample=label)
    rec.leq("prop5_upper", t_tr, math.sqrt(max(0.0, t_f)), tol, dim=d, sample=label)
    rec.leq("prop6_fidelity_weight", t_f, t_w, tol, dim=d, sample=label)

    renyi = {a: float(t_renyi(rho, a)) for a in cfg.renyi_alphas()}
    for a, v in renyi.items():
        rec.leq("prop7_fidelity_renyi", t_f, (1.0 - a) * v, tol, dim=d, sample=label, alpha=a)
    for a2, a1 in combinations(sorted(renyi), 2):
        rec.leq("prop8_renyi_monotone", renyi[a2], renyi[a1], tol, dim=d, sample=label, alpha1=a1, alpha2=a2)

    rec.close("weight_oracle", t_w, float(t_weight_bisection(rho)), 1e-8 * tf, dim=d, sample=label)
    for p in grid:
        rec.close("f_alpha_z_dual_path", f_alpha_z(rho, p), f_alpha_z_trace_form(rho, p), 1e-8 * tf,
                  dim=d, sample=label, alpha=p.alpha, z=p.z)

    rec.close("bures_identity", 2.0 * float(t_gr(rho, 0.5, 0.5)), float(t_bures(rho)), 1e-10 * tf,
              dim=d, sample=label)
    for mu in cfg.mu_grid:
        rec.close("tsallis_identity", float(t_tsallis(rho, mu)) * (1.0 - mu), float(t_gr(rho, 1.0 - mu, 1.0)),
                  1e-12 * tf, dim=d, sample=label, mu=mu)
    rec.close("renyi_half_identity", float(t_renyi(rho, 0.5)), 2.0 * t_f, 1e-10 * tf, dim=d, sample=label)


def run_proposition_suite(cfg):
    """Inequalities and identities relating the measures to each other."""
    rec = _Recorder(cfg)
    warnings = [
        "prop1_1_printed (T^GR_{a2,a1} <= T^GR_{a2,a2} for a1 <= a2) not checked: "
        "z = a1 lies outside the measure's parameter domain except when a1 = a2",
    ]
    for d in cfg.dims:
        partner_dims = [e for e in cfg.dims if d * e <= cfg.max_tensor_dim] or [1]
        for label, rho in _anchor_states(d):
            rng = sample_rng(cfg, "propositions", d, 10**6 + len(label))
            partner = pure_density(basis_state(2, 0)) if d * 2 <= cfg.max_tensor_dim else None
            _proposition_checks(rec, cfg, d, label, rho, rng, partner)
        for i in range(cfg.samples_per_dim):
            rng = sample_rng(cfg, "propositions", d, i)
            rho = _random_state(d, rng)
            e = int(partner_dims[int(rng.integers(len(partner_dims)))])
            partner = _random_state(e, rng) if e >= 2 else None
            _proposition_checks(rec, cfg, d, i, rho, rng, partner)
    return rec.report("propositions", warnings)


def _random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2.0


def _certify(rec, w, d, sample):
    """Conditions 1 and 2 for a constructed witness."""
    rec.leq("witness_condition1", 0.0, w.free_expectation, 1e-10 * rec.cfg.tol_factor, dim=d,
            sample=sample, label=w.family)
    ground = DensityMatrix(w.ground_state(), validate=False)
    res = evaluate_witness(w, ground)
    not_free = float(np.max(np.abs(ground.data - free_state(d).data))) > 1e-8
    rec.flag("witness_condition2", res.detected and not_free, res.expectation, w.min_eigenvalue,
             dim=d, sample=sample, label=w.family)


def run_witness_suite(cfg):
    """Witness conditions, the W1 and W_theta identities, pairwise and imaginarity witnesses."""
    rec = _Recorder(cfg)
    tf = cfg.tol_factor
    band = 1e-9
    for d in cfg.dims:
        f1 = free_state(d)
        g_wit = witness_theta(d, math.pi / 2)
        rec.close("non_universality_generator", free_overlap(g_wit.op), 1.0, 1e-12 * tf, dim=d, sample="W_pi/2")

        hot_vec = np.zeros(d, dtype=np.complex128)
        hot_vec[0], hot_vec[1] = 1 / math.sqrt(2), -1 / math.sqrt(2)
        hot = pure_density(hot_vec)
        for theta in cfg.theta_grid:
            w = witness_theta(d, theta)
            _certify(rec, w, d, f"theta={theta}")
            tau = theta_threshold(theta)
            for sign, expect in ((+1, True), (-1, False)):
                t = tau + sign * 1e-6
                if not 0.0 <= t <= 1.0:
                    rec.skip("theta_boundary_flip")
                    continue
                rho_t = DensityMatrix((1 - t) * f1.data + t * hot.data, validate=False)
                res = evaluate_witness(w, rho_t)
                rec.flag("theta_boundary_flip", res.detected == expect, float(t_fidelity(rho_t)), tau,
                         dim=d, sample=f"boundary{sign:+d}", theta=theta)

        w1 = witness_w1(d)
        _certify(rec, w1, d, "w1")

        for i in range(cfg.samples_per_dim):
            rng = sample_rng(cfg, "witnesses", d, i)
            rho = _random_state(d, rng)
            t_f = float(t_fidelity(rho))

            a = _random_hermitian(d, rng)
            try:
                wu = universal_witness(a)
            except WitnessError:
                rec.skip("universal_zero_free_overlap")
            else:
                rec.close("universal_zero_free_overlap", free_overlap(wu.op), 0.0, 1e-12 * tf, dim=d, sample=i)
                _certify(rec, wu, d, i)

            rec.close("w1_identity", evaluate_witness(w1, rho).expectation, -t_f, 1e-12 * tf, dim=d, sample=i)

            for theta in cfg.theta_grid:
                w = witness_theta(d, theta)
                res = evaluate_witness(w, rho)
                rec.close("theta_tf_roundtrip", res.derived_tf, t_f, 1e-10 * tf, dim=d, sample=i, theta=theta)
                tau = w.threshold
                if abs(t_f - tau) <= band:
                    rec.skip("theta_threshold_equivalence")
                    continue
                rec.flag("theta_threshold_equivalence", res.detected == (t_f > tau), res.expectation, tau,
                         dim=d, sample=i, theta=theta)

            j, k = (int(x) for x in rng.choice(d, size=2, replace=False))
            phi = float(rng.uniform(0.0, 2.0 * math.pi))
            if 0.0 < phi < 2.0 * math.pi:
                wjk = witness_jk(d, j, k, phi)
                _certify(rec, wjk, d, i)
                rec.close("jk_free_expectation", wjk.free_expectation, 0.0, 1e-12 * tf, dim=d, sample=i,
                          j=j, k=k, phi=phi)
                canon = DensityMatrix(canonical_jk_state(d, j, k, phi), validate=False)
                res = evaluate_witness(wjk, canon)
                rec.close("jk_canonical_expectation", res.expectation, 2.0 * math.cos(phi) / d - 1.0,
                          1e-12 * tf, dim=d, sample=i, j=j, k=k, phi=phi)
                rec.flag("jk_canonical_detected", res.detected, res.expectation, 0.0, dim=d, sample=i,
                         j=j, k=k, phi=phi)

            im = float(rho.data[j, k].imag)
            for sign, factor in (("+", -2.0), ("-", 2.0)):
                wi = imaginarity_witness(d, j, k, sign)
                _certify(rec, wi, d, i)
                res = evaluate_witness(wi, rho)
                rec.close("imaginarity_identity", res.expectation, factor * im, 1e-12 * tf, dim=d, sample=i,
                          j=j, k=k, sign=sign)
                if abs(im) <= 1e-10:
                    rec.skip("imaginarity_sign_equivalence")
                    continue
                want = im > 0 if sign == "+" else im < 0
                rec.flag("imaginarity_sign_equivalence", res.detected == want, res.expectation, im,
                         dim=d, sample=i, j=j, k=k, sign=sign)
    return rec.report("witnesses")


SUITES = {
    "axioms": run_axiom_suite,
    "propositions": run_proposition_suite,
    "witnesses": run_witness_suite,
}


def run_all(cfg):
    return [fn(cfg) for fn in SUITES.values()]
