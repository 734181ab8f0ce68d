"""Polynomials in Bessel eigenfunctions.

p_{alpha,m}(t) = sum_i B_i j_alpha(q_i t), i = 1..m+1, is the Hankel preimage
of g_{alpha,m} on [0, 1]. It is positive, decreasing, and has a zero of
multiplicity 2m+1 at t = 1. The functions F_{alpha,n} with minimal zero
interval are rescaled versions of p_{alpha,m} (n odd) or of an integral of
p_{alpha+1,m} (n even). The module also counts zeros of eigenfunction
combinations, which is how the Chebyshev-system property is exercised.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .bessel import Order, as_order, b_const, j_norm, j_norm_derivative, zeros

__all__ = [
    "Source",
    "PartialFraction",
    "EigenPolynomial",
    "MonotonicityReport",
    "MultiplicityError",
    "partial_fractions",
    "build_p",
    "determinant_route",
    "integrated_p",
    "multiplicity_at",
    "multiplicity_at_one",
    "monotonicity_check",
    "resolvable_delta",
    "thm_hn_function",
    "positivity_check",
    "count_zeros",
]

ZERO_REL = 1e-8
NONZERO_REL = 1e-4


class Source(enum.Enum):
    P_ALPHA_M = "p_alpha_m"
    F_N_ODD = "F_n_odd"
    F_N_EVEN = "F_n_even"
    COMBINATION = "combination"


class MultiplicityError(RuntimeError):
    """A derivative landed in the dead band between 'zero' and 'nonzero'."""


@dataclass(frozen=True)
class PartialFraction:
    """1 / prod_i (1 - lam^2/q_i^2) = sum_i A_i / (q_i^2 - lam^2)."""

    zeros_squared: np.ndarray
    A: np.ndarray

    def __call__(self, lam):
        lam2 = np.asarray(lam, dtype=float) ** 2
        return np.sum(self.A / (self.zeros_squared - lam2[..., None]), axis=-1)

    def product_form(self, lam):
        lam2 = np.asarray(lam, dtype=float) ** 2
        return 1.0 / np.prod(1.0 - lam2[..., None] / self.zeros_squared, axis=-1)


def partial_fractions(order, m: int) -> PartialFraction:
    q2 = zeros(order, m + 1).zeros ** 2
    A = np.empty(m + 1)
    for i in range(m + 1):
        others = np.delete(q2, i)
        # prod_j q_j^2 / prod_{j != i} (q_j^2 - q_i^2), kept as a product of ratios
        A[i] = q2[i] * np.prod(others / (others - q2[i]))
    return PartialFraction(q2, A)


@dataclass(frozen=True)
class EigenPolynomial:
    """constant + sum_k coefficients[k] * j_alpha(frequencies[k] * t)."""

    order: Order
    frequencies: np.ndarray
    coefficients: np.ndarray
    constant: float = 0.0
    source: Source = Source.P_ALPHA_M
    m: int | None = None

    @property
    def terms(self) -> list[tuple[float, float]]:
        return list(zip(self.frequencies.tolist(), self.coefficients.tolist()))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.constant + np.sum(self.coefficients * j_norm(self.order.alpha, t[..., None] * self.frequencies),
                                     axis=-1)
        return out if np.ndim(out) else float(out)

    def derivative(self, t, n: int = 1):
        """n-th derivative, termwise: sum_k B_k w_k^n j_alpha^(n)(w_k t)."""
        if n == 0:
            return self(t)
        t = np.asarray(t, dtype=float)
        d = j_norm_derivative(self.order.alpha, t[..., None] * self.frequencies, n)
        out = np.sum(self.coefficients * self.frequencies**n * d, axis=-1)
        return out if np.ndim(out) else float(out)

    def derivative_scale(self, n: int) -> float:
        return float(np.max(np.abs(self.coefficients) * self.frequencies**n))

    def local_eval(self, t, center: float, multiplicity: int, nterms: int = 30):
        """Taylor series about a zero of known multiplicity: sum_{k >= multiplicity} p^(k)(c) (t-c)^k / k!.

        Direct summation loses everything below ~1e-16 * max|B_k| near such a
        zero; the series keeps full relative accuracy there.
        """
        t = np.asarray(t, dtype=float)
        h = t - center
        out = np.zeros_like(h)
        for k in range(multiplicity, multiplicity + nterms):
            out = out + float(self.derivative(center, k)) * h**k / math.factorial(k)
        return out if np.ndim(out) else float(out)

    def normalized(self) -> "EigenPolynomial":
        """Scaled so that the value at 0 is 1."""
        c = float(self(0.0))
        return EigenPolynomial(self.order, self.frequencies, self.coefficients / c, self.constant / c,
                               self.source, self.m)


def build_p(order, m: int) -> EigenPolynomial:
    """p_{alpha,m} with B_i = -b_alpha^-1 A_i / (q_i j_alpha'(q_i))."""
    order = as_order(order)
    alpha = order.alpha
    q = zeros(alpha, m + 1).zeros
    pf = partial_fractions(order, m)
    dphi = q * np.asarray(j_norm_derivative(alpha, q, 1))
    B = -pf.A / (b_const(alpha) * dphi)
    if np.any(B <= 0):
        raise RuntimeError(f"p_(alpha={alpha}, m={m}) has a non-positive coefficient: {B}")
    return EigenPolynomial(order, q.copy(), B, 0.0, Source.P_ALPHA_M, m)


def determinant_route(order, m: int, t) -> np.ndarray:
    """p_{alpha,m}(t) from the Vandermonde-type determinant expansion (independent of build_p)."""
    order = as_order(order)
    alpha = order.alpha
    q = zeros(alpha, m + 1).zeros
    q2 = q**2
    dphi = q * np.asarray(j_norm_derivative(alpha, q, 1))
    vdm = np.prod([q2[i] - q2[j] for i in range(m + 1) for j in range(i)]) if m else 1.0
    c = np.prod(q2) / (b_const(alpha) * vdm)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lower = np.vstack([q2**l for l in range(m)]) if m else np.zeros((0, m + 1))
    out = np.empty_like(t)
    for idx, tv in enumerate(t):
        top = np.asarray(j_norm(alpha, q * tv)) / dphi
        out[idx] = -c * np.linalg.det(np.vstack([top, lower]))
    return out


def integrated_p(order, m: int) -> EigenPolynomial:
    """P(t) = int_t^1 s p_{alpha+1,m}(s) ds as an order-alpha eigenfunction sum plus a constant."""
    order = as_order(order)
    inner = build_p(order.shifted(1), m)
    qp = inner.frequencies
    Bpp = 2.0 * (order.alpha + 1.0) * inner.coefficients / qp**2
    const = -float(np.sum(Bpp * np.asarray(j_norm(order.alpha, qp))))
    return EigenPolynomial(order, qp.copy(), Bpp, const, Source.F_N_EVEN, m)


def multiplicity_at(p: EigenPolynomial, t0: float, max_order: int = 12) -> int:
    """Number of leading derivatives of p vanishing at t0 (dead-band policy).

    |p^(i)(t0)| <= 1e-8 * max_k |B_k| w_k^i counts as zero, >= 1e-4 * that
    scale as nonzero; anything in between raises MultiplicityError.
    """
    for i in range(max_order + 1):
        val = float(p.derivative(t0, i)) if i else float(p(t0))
        scale = p.derivative_scale(i) if i else max(p.derivative_scale(0), abs(p.constant))
        rel = abs(val) / scale
        if rel <= ZERO_REL:
            continue
        if rel >= NONZERO_REL:
            return i
        raise MultiplicityError(
            f"derivative {i} at t={t0}: |value|/scale = {rel:.3e} lies in the dead band "
            f"[{ZERO_REL:g}, {NONZERO_REL:g}] (value {val:.6e}, scale {scale:.6e})")
    raise MultiplicityError(f"first {max_order + 1} derivatives all vanish at t={t0}")


def multiplicity_at_one(p: EigenPolynomial) -> int:
    if p.source is not Source.P_ALPHA_M:
        raise ValueError("multiplicity_at_one applies to p_{alpha,m}")
    return multiplicity_at(p, 1.0)


@dataclass(frozen=True)
class MonotonicityReport:
    max_derivative: float
    min_value: float
    min_value_interior: float
    max_derivative_interior: float
    delta: float

    @property
    def passed(self) -> bool:
        return (self.max_derivative <= 1e-12 and self.min_value >= -1e-12
                and self.min_value_interior > 0 and self.max_derivative_interior < 0)


def resolvable_delta(p: EigenPolynomial, floor: float = 1e-10) -> float:
    """Distance from t = 1 at which p rises above floor * p(0).

    p behaves like p^(2m+1)(1) (t-1)^(2m+1) / (2m+1)! near t = 1, so closer
    to 1 its values sink below double-precision noise and strict positivity
    can no longer be observed.
    """
    k = 2 * p.m + 1
    lead = abs(float(p.derivative(1.0, k))) / math.factorial(k)
    return max(1e-3, (floor * float(p(0.0)) / lead) ** (1.0 / k))


def monotonicity_check(p: EigenPolynomial, step: float = 1e-4, delta: float | None = None) -> MonotonicityReport:
    """p' <= 0 and p >= 0 on [0, 1] (to 1e-12 relative); p > 0 on [0, 1-delta], p' < 0 on (delta, 1-delta).

    delta defaults to resolvable_delta(p).
    """
    if p.source is not Source.P_ALPHA_M:
        raise ValueError("monotonicity_check applies to p_{alpha,m}")
    if delta is None:
        delta = resolvable_delta(p)
    t = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    vals = p(t)
    der = p.derivative(t, 1)
    scale = float(vals[0])
    inner = (t >= delta) & (t <= 1.0 - delta)
    return MonotonicityReport(
        max_derivative=float(np.max(der)) / scale,
        min_value=float(np.min(vals)) / scale,
        min_value_interior=float(np.min(vals[t <= 1.0 - delta])) / scale,
        max_derivative_interior=float(np.max(der[inner])) / scale,
        delta=delta,
    )


def positivity_check(F: EigenPolynomial, theta: float, n: int, margin: float = 1e-3,
                     step: float = 1e-4, switch: float = 0.25) -> float:
    """min of F / F(0) over [0, theta - margin].

    Within `switch` of theta, F is evaluated from its Taylor series about theta
    starting at order n, the multiplicity established by multiplicity_at.
    """
    if multiplicity_at(F, theta) != n:
        raise RuntimeError(f"F does not vanish to order exactly {n} at theta = {theta}")
    t = np.arange(0.0, theta - margin + step / 2, step)
    far = t < theta - switch
    vals = np.empty_like(t)
    vals[far] = F(t[far])
    vals[~far] = F.local_eval(t[~far], theta, n)
    return float(np.min(vals)) / float(F(0.0))


def thm_hn_function(order, n: int) -> tuple[EigenPolynomial, float]:
    """F_{alpha,n} (type 1, positive on [0, theta), zero of multiplicity n at theta) and theta_{alpha,n}."""
    order = as_order(order)
    if n < 1:
        raise ValueError("n must be >= 1")
    m = (n - 1) // 2
    if n % 2:
        p = build_p(order, m)
        theta = float(p.frequencies[-1])
        F = EigenPolynomial(order, p.frequencies / theta, p.coefficients, 0.0, Source.F_N_ODD, m)
    else:
        P = integrated_p(order, m)
        theta = float(P.frequencies[-1])
        F = EigenPolynomial(order, P.frequencies / theta, P.coefficients, P.constant, Source.F_N_EVEN, m)
    return F, theta


def count_zeros(order, coefficients, frequencies, interval=(0.0, 1.0), include_constant: bool = False,
                *, closed_left: bool = True, closed_right: bool = False, resolution: float = 1e-7) -> int:
    """Zeros (with multiplicity) of sum_k c_k j_alpha(q_k t) on an interval.

    frequencies are 1-based zero indices k, giving the Dirichlet family
    j_alpha(q_{alpha,k} t). With include_constant the Neumann family is used:
    coefficients[0] multiplies 1 and the rest multiply j_alpha(q_{alpha+1,k} t).
    """
    order = as_order(order)
    alpha = order.alpha
    c = np.asarray(coefficients, dtype=float)
    idx = np.asarray(frequencies, dtype=int)
    if not np.any(c != 0):
        raise ValueError("coefficient vector must be nontrivial")
    if include_constant:
        const, c = float(c[0]), c[1:]
        tab = zeros(alpha + 1, int(idx.max()))
    else:
        const = 0.0
        tab = zeros(alpha, int(idx.max()))
    if len(c) != len(idx):
        raise ValueError("one frequency index per (non-constant) coefficient")
    w = tab.zeros[idx - 1]
    P = EigenPolynomial(order, w, c, const, Source.COMBINATION)
    a, b = map(float, interval)
    scale = float(np.sum(np.abs(c)) + abs(const))

    def locate(npts):
        t = np.linspace(a, b, npts)
        v = P(t)
        found = []
        for i in np.nonzero(v[:-1] * v[1:] < 0)[0]:
            found.append(("simple", _bisect(P, t[i], t[i + 1])))
        tiny = np.abs(v) <= 1e-14 * scale
        for i in np.nonzero(tiny)[0]:
            found.append(("exact", t[i]))
        # tangential zeros: local minima of |P| that nearly touch zero without a sign change
        av = np.abs(v)
        cand = np.nonzero((av[1:-1] <= av[:-2]) & (av[1:-1] <= av[2:]) & (v[:-2] * v[2:] > 0)
                          & ~tiny[1:-1] & (av[1:-1] <= 1e-6 * scale))[0] + 1
        for i in cand:
            tm = _golden_min(lambda x: abs(P(x)), t[i - 1], t[i + 1])
            if abs(P(tm)) <= 1e-10 * scale:
                d1 = P.derivative(np.array([tm - 1e-6, tm + 1e-6]), 1)
                if d1[0] * d1[1] <= 0:
                    found.append(("double", tm))
        return found

    npts = max(256, int(8 * w.max() * (b - a)))
    prev = None
    for _ in range(8):
        pts = locate(npts)
        key = sorted(round(z, 6) for _, z in pts)
        if prev is not None and key == prev:
            break
        prev = key
        npts = 2 * npts - 1
    else:
        raise RuntimeError("zero count did not stabilize under grid refinement")
    eps = 1e-9
    kept = [(z, kind) for kind, z in pts
            if not ((z <= a + eps and not closed_left) or (z >= b - eps and not closed_right))]
    kept.sort()
    merged: list[tuple[float, str]] = []
    for z, kind in kept:
        # the same zero reported by two detectors
        if merged and z - merged[-1][0] < 1e-10:
            continue
        merged.append((z, kind))
    locs = [z for z, _ in merged]
    if len(locs) > 1 and np.min(np.diff(locs)) < resolution:
        raise RuntimeError(f"zeros closer than {resolution:g}; refine with a smaller resolution or exact arithmetic")
    total = 0
    for z, kind in merged:
        if kind == "double":
            total += 2
        elif kind == "exact":
            total += multiplicity_at(P, z)
        else:
            total += 1
    return total


def _bisect(f, a: float, b: float) -> float:
    return optimize.brentq(f, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def _golden_min(f, a: float, b: float) -> float:
    return optimize.minimize_scalar(f, bounds=(a, b), method="bounded", options={"xatol": 1e-12}).x
