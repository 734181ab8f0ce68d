"""Verification suites behind `logan-lab verify`.

Each suite is split into independent tasks (one per parameter tuple) so the
command line can fan them out over a worker pool. A task returns a list of
Check records and a list of plain result records; nothing is shared between
tasks except the immutable zero and rule caches.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .bessel import b_const, j_norm, zeros
from .eigenpoly import (MultiplicityError, build_p, count_zeros, determinant_route, monotonicity_check,
                        multiplicity_at_one, positivity_check, thm_hn_function)
from .extremal import (ExtremalFunction, Variant, last_sign_change, logan_product, moments,
                       uncertainty_certificate)
from .hankel import Measure, RadialProfile, gram_matrix, hankel_transform, psd_floor, sonine_lower
from .integrate import infinite_integral
from .jacobi_limit import (divided_poly, gram_limit_check, interval_gram, mehler_heine_check,
                           tail_certificate, zero_scaling_check)
from .quadrature import apply_gauss, apply_radau, bessel_square_moment, gauss_rule, radau_rule

__all__ = ["Check", "ToleranceProfile", "PROFILES", "SUITES", "Task", "build_tasks", "run_task"]


@dataclass(frozen=True)
class ToleranceProfile:
    quadrature_rel: float = 1e-7
    zero_abs: float = 1e-8
    psd_floor: float = 1e-8
    grid_density: int = 100

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")


PROFILES = {
    "default": ToleranceProfile(),
    "strict": ToleranceProfile(quadrature_rel=1e-9, zero_abs=1e-10, psd_floor=1e-10, grid_density=200),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    @classmethod
    def at_most(cls, name: str, value: float, tolerance: float) -> "Check":
        value = float(value)
        return cls(name, bool(math.isfinite(value) and value <= tolerance), value, float(tolerance))

    @classmethod
    def at_least(cls, name: str, value: float, bound: float) -> "Check":
        value = float(value)
        return cls(name, bool(math.isfinite(value) and value >= bound), value, float(bound))

    @classmethod
    def failed(cls, name: str, tolerance: float = math.nan) -> "Check":
        return cls(name, False, math.nan, tolerance)


Outcome = tuple[list[Check], list[dict]]


def _tag(alpha, **kw) -> str:
    return ",".join([f"alpha={alpha:g}"] + [f"{k}={v}" for k, v in kw.items()])


def logan_task(alpha: float, m: int, prof: ToleranceProfile, **_) -> Outcome:
    tag = _tag(alpha, m=m)
    pc = logan_product(alpha, m)
    ef = pc.extremizer
    q = ef.zero_table.q(m + 1)
    checks = [Check.at_most(f"logan[{tag}].last_sign_change", abs(last_sign_change(ef, m) - q), prof.zero_abs)]
    if alpha == -0.5:
        checks.append(Check.at_most(f"logan[{tag}].classical_product", abs(pc.value - (2 * m + 1) * math.pi), 1e-10))
    t = np.arange(q, 50.0 * q, 1.0 / prof.grid_density)[1:]
    sign = -1.0 if m % 2 else 1.0
    checks.append(Check.at_most(f"logan[{tag}].sign_beyond_last_zero", float(np.max(sign * ef(t))), 1e-12))
    rep = moments(ef, m)
    checks.append(Check.at_most(f"logan[{tag}].moment_orthogonality", max(rep.relative()), prof.quadrature_rel))
    return checks, [{"alpha": alpha, "m": m, "product": pc.value, "certificate": pc.certificate,
                     "moments": list(rep.values)}]


def uncertainty_task(alpha: float, m: int, s_list, prof: ToleranceProfile, **_) -> Outcome:
    checks, results = [], []
    for s in s_list:
        for variant in ("I", "III"):
            tag = _tag(alpha, m=m, s=s, variant=variant)
            cert = uncertainty_certificate(alpha, m, s, variant)
            beta = alpha + s + 1 if variant == "I" else alpha + s
            expected = 2.0 * zeros(beta, m + 1).q(m + 1)
            checks.append(Check.at_most(f"uncertainty[{tag}].product", abs(cert.product - expected), 1e-12 * expected))
            checks.append(Check.at_most(f"uncertainty[{tag}].sign_change",
                                        abs(cert.sign_change_product - cert.product), 2 * prof.zero_abs))
            if cert.origin_derivatives:
                checks.append(Check.at_most(f"uncertainty[{tag}].origin_derivatives",
                                            max(abs(d) for d in cert.origin_derivatives), 1e-12))
            checks.append(Check.at_most(f"uncertainty[{tag}].moments", max(cert.moments.relative()),
                                        prof.quadrature_rel))
            results.append({"alpha": alpha, "m": m, "s": s, "variant": variant, "product": cert.product})
    return checks, results


def eigenpoly_task(alpha: float, m: int, prof: ToleranceProfile, **_) -> Outcome:
    tag = _tag(alpha, m=m)
    p = build_p(alpha, m)
    checks = []
    try:
        mult = multiplicity_at_one(p)
        checks.append(Check.at_most(f"eigenpoly[{tag}].multiplicity_at_one", abs(mult - (2 * m + 1)), 0))
    except MultiplicityError:
        checks.append(Check.failed(f"eigenpoly[{tag}].multiplicity_at_one", 0))
    mono = monotonicity_check(p)
    checks.append(Check.at_most(f"eigenpoly[{tag}].nonincreasing", mono.max_derivative, 1e-12))
    checks.append(Check.at_least(f"eigenpoly[{tag}].nonnegative", mono.min_value, -1e-12))
    checks.append(Check(f"eigenpoly[{tag}].strict_interior", mono.passed, mono.min_value_interior, 0.0))
    grid = np.linspace(0.0, 1.0, 41)
    checks.append(Check.at_most(f"eigenpoly[{tag}].determinant_route",
                                float(np.max(np.abs(p(grid) - determinant_route(alpha, m, grid)))) / p(0.0), 1e-10))
    q = zeros(alpha, m + 1).q(m + 1)
    lam = np.arange(0.0, 3.0 * q, 1.0 / prof.grid_density)
    H = hankel_transform(Measure(alpha), RadialProfile(p, support_bound=1.0, decay_exponent=math.inf), lam)
    g = ExtremalFunction(alpha, m, Variant.G)
    checks.append(Check.at_most(f"eigenpoly[{tag}].master_identity", float(np.max(np.abs(H - g(lam)))), 1e-8))
    results = [{"alpha": alpha, "m": m, "coefficients": p.coefficients.tolist(), "delta": mono.delta}]
    for n in (2 * m + 1, 2 * m + 2):
        ntag = _tag(alpha, n=n)
        F, theta = thm_hn_function(alpha, n)
        try:
            pos = positivity_check(F, theta, n)
            checks.append(Check(f"eigenpoly[{ntag}].F_positive", bool(pos > 0), pos, 0.0))
        except (RuntimeError, MultiplicityError):
            checks.append(Check.failed(f"eigenpoly[{ntag}].F_multiplicity", n))
        if alpha == -0.5:
            checks.append(Check.at_most(f"eigenpoly[{ntag}].theta_classical", abs(theta - math.pi * n / 2), 1e-10))
            lam = np.linspace(0.0, theta, 200)
            checks.append(Check.at_most(f"eigenpoly[{ntag}].cosine_power",
                                        float(np.max(np.abs(F(lam) / F(0.0) - np.cos(lam / n) ** n))), 1e-10))
        results.append({"alpha": alpha, "n": n, "theta": theta})
    return checks, results


def _relative_min_eig(G: np.ndarray) -> float:
    """Smallest eigenvalue over max(1, ||G||_2), the scale used by psd_floor."""
    return float(np.linalg.eigvalsh(G)[0]) / -psd_floor(G, 1.0)


def posdef_task(alpha: float, m: int, prof: ToleranceProfile, points: int, sets: int,
                rng: np.random.Generator, **_) -> Outcome:
    checks, results = [], []
    meas = Measure(alpha)
    families = [("g", ExtremalFunction(alpha, m, Variant.G).profile(), meas),
                ("f", ExtremalFunction(alpha, m, Variant.F).profile(), meas)]
    for theta in (0.5, 1.3):
        families.append((f"g_lift{theta:g}", ExtremalFunction(alpha + theta, m, Variant.G).profile(), meas))
    for name, prof_f, measure in families:
        worst = math.inf
        for _ in range(sets):
            pts = np.sort(rng.uniform(0.0, 10.0, points))
            worst = min(worst, _relative_min_eig(gram_matrix(measure, prof_f, pts)))
        checks.append(Check.at_least(f"posdef[{_tag(alpha, m=m, family=name)}].min_eigenvalue", worst,
                                     -prof.psd_floor))
        results.append({"alpha": alpha, "m": m, "family": name, "min_eigenvalue_rel": worst})
    for theta in (0.5, 1.3):
        beta = alpha + theta
        p = build_p(beta, m)
        H = RadialProfile(p, support_bound=1.0, decay_exponent=math.inf)
        vals = np.array([sonine_lower(meas, Measure(beta), H, t) for t in np.linspace(0.0, 0.999, 12)])
        checks.append(Check.at_least(f"posdef[{_tag(alpha, m=m, theta=theta)}].sonine_lowered_transform",
                                     float(vals.min()) / float(vals.max()), -1e-12))
    return checks, results


def mehler_task(alpha: float, k: int, prof: ToleranceProfile, rng: np.random.Generator, **_) -> Outcome:
    tag = _tag(alpha, k=k)
    checks, results = [], []
    worst = math.inf
    try:
        for n in range(max(k, 1), 61):
            worst = min(worst, divided_poly(alpha, n, k).min_relative)
        checks.append(Check.at_least(f"mehler[{tag}].expansion_nonnegative", worst, -1e-10))
    except ArithmeticError as exc:
        checks.append(Check.failed(f"mehler[{tag}].expansion_nonnegative: {exc}", -1e-10))
    G = interval_gram(divided_poly(alpha, 10 + k, k), rng.uniform(-1.0, 1.0, 6))
    checks.append(Check.at_least(f"mehler[{tag}].interval_gram_psd", _relative_min_eig(G), -prof.psd_floor))
    y = np.linspace(0.0, 8.0, 801)
    ns = (50, 100, 200)
    sup = [mehler_heine_check(alpha, k, n, y) for n in ns]
    checks.append(Check(f"mehler[{tag}].sup_error_decreasing", bool(sup[0] > sup[1] > sup[2]), sup[2], sup[1]))
    checks.append(Check.at_most(f"mehler[{tag}].sup_error_n200", sup[2], 2e-2))
    pts = np.sort(rng.uniform(0.0, 5.0, 6))
    gram = [gram_limit_check(alpha, k, n, pts).max_error for n in ns]
    checks.append(Check(f"mehler[{tag}].gram_error_decreasing", bool(gram[0] > gram[1] > gram[2]), gram[2], gram[1]))
    if k:
        # k = 0 is the bare kernel j_alpha; its O(1/n) error grows with alpha and is only reported
        checks.append(Check.at_most(f"mehler[{tag}].gram_error_n200", gram[2], 1e-2))
    if k:
        zs = [float(np.max(zero_scaling_check(alpha, n, k))) for n in ns]
        checks.append(Check(f"mehler[{tag}].zero_scaling", bool(zs[0] > zs[1] > zs[2]), zs[2], zs[1]))
    cert = tail_certificate(alpha, 8.0)
    checks.append(Check(f"mehler[{tag}].tail_envelope", cert.monotone and cert.within_envelope,
                        float(cert.partial_sums[-1]), cert.envelope))
    results.append({"alpha": alpha, "k": k, "sup_errors": sup, "gram_errors": gram, "min_coefficient_rel": worst})
    return checks, results


COMBINATIONS = 500


def _count_or_none(*args, **kw):
    try:
        return count_zeros(*args, **kw)
    except RuntimeError:
        return None


def chebyshev_task(alpha: float, n: int, prof: ToleranceProfile, rng: np.random.Generator, **_) -> Outcome:
    checks, results = [], []
    families = [("dirichlet", np.arange(1, n + 1), False, (0, n - 1)),
                ("neumann", np.arange(1, n), True, (0, n - 1))]
    if n >= 3:
        families.append(("sturm", np.arange(n - 2, n + 1), False, (n - 3, n - 1)))
    for name, freqs, constant, (lo, hi) in families:
        ncoef = len(freqs) + (1 if constant else 0)
        counts = []
        for _ in range(COMBINATIONS):
            c = rng.standard_normal(ncoef)
            if name == "sturm":
                counts.append(_count_or_none(alpha, c, freqs, closed_left=False))
            else:
                counts.append(_count_or_none(alpha, c, freqs, include_constant=constant))
        tag = _tag(alpha, n=n, family=name)
        unresolved = sum(x is None for x in counts)
        got = [x for x in counts if x is not None]
        checks.append(Check.at_most(f"chebyshev[{tag}].unresolved", unresolved, 0))
        checks.append(Check.at_most(f"chebyshev[{tag}].max_zeros", max(got), hi))
        checks.append(Check.at_least(f"chebyshev[{tag}].min_zeros", min(got), lo))
        results.append({"alpha": alpha, "n": n, "family": name, "histogram":
                        {str(v): got.count(v) for v in sorted(set(got))}})
    return checks, results


def quadrature_task(alpha: float, prof: ToleranceProfile, **_) -> Outcome:
    tag = _tag(alpha)
    checks = []
    b = b_const(alpha)
    rule = gauss_rule(alpha, 2.0, 64)
    checks.append(Check.at_least(f"quadrature[{tag}].gauss_weights_positive", float(rule.weights.min()), 0.0))
    checks.append(Check.at_most(f"quadrature[{tag}].gauss_weight_oracle", rule.oracle_discrepancy, 1e-8))
    exact = bessel_square_moment(alpha + 1, alpha)
    numeric = infinite_integral(lambda t: b * j_norm(alpha + 1, t) ** 2, origin_exp=2 * alpha + 1,
                                decay=2.0, period=math.pi).value
    got = apply_gauss(rule, lambda t: j_norm(alpha + 1, t) ** 2, decay=2 * alpha + 3).value
    checks.append(Check.at_most(f"quadrature[{tag}].gauss_bessel_square", abs(got - numeric) / exact,
                                prof.quadrature_rel))
    ef = ExtremalFunction(alpha, 1, Variant.F)
    rep = moments(ef, 0)
    got = apply_gauss(rule, ef, decay=ef.decay_exponent).value
    checks.append(Check.at_most(f"quadrature[{tag}].gauss_extremal", abs(got - rep.values[0]) / rep.scale[0],
                                prof.quadrature_rel))
    results = [{"alpha": alpha, "gauss_bessel_square": exact}]
    for r in (1, 2):
        rr = radau_rule(alpha, 2.0, r, 64)
        checks.append(Check.at_least(f"quadrature[{tag},r={r}].radau_weights_positive",
                                     min(float(rr.node_weights.min()), float(rr.origin_weights[-1])), 0.0))

        def f(t):
            return t**2 * j_norm(alpha + 2, t) ** 2

        direct = infinite_integral(lambda t: b * f(t), origin_exp=2 * alpha + 1, decay=2.0, period=math.pi).value
        derivs = [2.0 * (l == 1) for l in range(r)]  # f = t^2 + O(t^4)
        got = apply_radau(rr, f, derivatives=derivs, decay=2 * alpha + 3).value
        checks.append(Check.at_most(f"quadrature[{tag},r={r}].radau", abs(got - direct) / abs(direct), 1e-6))
        results.append({"alpha": alpha, "r": r, "direct": direct, "radau": got})
    return checks, results


SUITES: dict[str, Callable[..., Outcome]] = {
    "logan": logan_task,
    "uncertainty": uncertainty_task,
    "eigenpoly": eigenpoly_task,
    "posdef": posdef_task,
    "mehler": mehler_task,
    "chebyshev": chebyshev_task,
    "quadrature": quadrature_task,
}


@dataclass(frozen=True)
class Task:
    suite: str
    alpha: float
    index: int  # m, k or n depending on the suite; -1 when unused


def build_tasks(suite: str, alphas, ms) -> list[Task]:
    names = list(SUITES) if suite == "all" else [suite]
    tasks = []
    for name in names:
        for a in alphas:
            if name == "quadrature":
                tasks.append(Task(name, a, -1))
            elif name == "mehler":
                tasks.extend(Task(name, a, k) for k in range(0, max(ms) + 2))
            elif name == "chebyshev":
                tasks.extend(Task(name, a, m + 2) for m in ms)
            else:
                tasks.extend(Task(name, a, m) for m in ms)
    return tasks


def run_task(task: Task, seed: int, task_id: int, s_list, prof: ToleranceProfile, points: int, sets: int) -> Outcome:
    """Run one task; the random stream depends only on (seed, task_id)."""
    rng = np.random.default_rng([seed, task_id])
    fn = SUITES[task.suite]
    kw = dict(prof=prof, rng=rng, points=points, sets=sets, s_list=s_list)
    if task.index < 0:
        return fn(task.alpha, **kw)
    return fn(task.alpha, task.index, **kw)
