"""Extremizers f_{alpha,m}, g_{alpha,m} and their uncertainty-principle relatives.

    f_{alpha,m}(t) = j_alpha(t)**2 / prod_{i<=m+1} (1 - t**2 / q_{alpha,i}**2)
    g_{alpha,m}(t) = j_alpha(t)    / prod_{i<=m+1} (1 - t**2 / q_{alpha,i}**2)

Each denominator zero is cancelled by a zero of j_alpha; near those points the
quotient is evaluated from the Taylor expansion of j_alpha about the zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .bessel import Order, ZeroTable, as_order, b_const, j_norm, j_norm_derivative, series_coefficients, zeros
from .hankel import RadialProfile
from .integrate import infinite_integral

__all__ = [
    "BesselQuotient",
    "Variant",
    "ExtremalFunction",
    "MomentReport",
    "ProductCertificate",
    "last_sign_change",
    "sign_change_scan",
    "logan_product",
    "moments",
    "uncertainty_product",
    "uncertainty_certificate",
    "dunkl_radial_product",
]

TAYLOR_RADIUS = 1e-3


class Variant(enum.Enum):
    F = "f"
    G = "g"
    UNCERT_I = "uncert_i"
    UNCERT_III = "uncert_iii"


class BesselQuotient:
    """j_beta(t) / prod_i (1 - t**2/q_i**2) for a set of zeros q_i of j_beta.

    Within TAYLOR_RADIUS * q_k of a zero the factor j_beta(t) / (t - q_k) is
    summed from the Taylor series of j_beta about q_k instead of dividing.
    """

    def __init__(self, beta: float, qs):
        self.beta = float(beta)
        self.q = np.asarray(qs, dtype=float)
        self._taylor = []
        for qk in self.q:
            r = TAYLOR_RADIUS * qk
            nterms = 4
            while r**nterms / math.factorial(nterms) > 1e-18 and nterms < 30:
                nterms += 1
            ders = np.array([j_norm_derivative(self.beta, qk, n) for n in range(1, nterms + 1)])
            self._taylor.append((qk, r, ders / np.array([math.factorial(n) for n in range(1, nterms + 1)])))

    def __call__(self, t: np.ndarray) -> np.ndarray:
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        j = np.asarray(j_norm(self.beta, t), dtype=float)
        factors = 1.0 - (t[..., None] / self.q) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            out = j / np.prod(factors, axis=-1)
        for k, (qk, r, coef) in enumerate(self._taylor):
            near = np.abs(t - qk) < r
            if not np.any(near):
                continue
            h = t[near] - qk
            jq = np.polynomial.polynomial.polyval(h, coef)
            others = np.prod(np.delete(factors[near], k, axis=-1), axis=-1)
            out[near] = jq * (-qk * qk / (qk + t[near])) / others
        return out[0] if scalar else out


@dataclass(frozen=True)
class ExtremalFunction:
    order: Order
    m: int
    variant: Variant = Variant.F
    s: int = 0

    def __init__(self, order, m: int, variant: Variant = Variant.F, s: int = 0):
        if m < 0 or s < 0:
            raise ValueError("m and s must be nonnegative")
        if variant in (Variant.F, Variant.G) and s:
            raise ValueError("s applies to the uncertainty variants only")
        object.__setattr__(self, "order", as_order(order))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "variant", Variant(variant))
        object.__setattr__(self, "s", int(s))

    # the order whose zeros sit in the denominator
    @property
    def inner_alpha(self) -> float:
        a = self.order.alpha
        if self.variant is Variant.UNCERT_I:
            return a + self.s + 1
        if self.variant is Variant.UNCERT_III:
            return a + self.s
        return a

    @property
    def power(self) -> int:
        return 1 if self.variant is Variant.G else 2

    @property
    def prefactor_exponent(self) -> int:
        """f = t**prefactor_exponent * (inner quotient)."""
        return 2 * self.s + 2 if self.variant is Variant.UNCERT_I else 0

    @property
    def type_(self) -> float:
        """Exponential type: 2 for the squared families, 1 for g."""
        return float(self.power)

    @property
    def zero_table(self) -> ZeroTable:
        return zeros(self.inner_alpha, self.m + 1)

    @property
    def decay_exponent(self) -> float:
        """d with |f(t)| = O(t**-d), from the factorization."""
        beta = self.inner_alpha
        return self.power * (beta + 0.5) + 2 * self.m + 2 - self.prefactor_exponent

    @property
    def period(self) -> float:
        return math.pi if self.power == 2 else 2.0 * math.pi

    @cached_property
    def _quotient(self) -> "BesselQuotient":
        return BesselQuotient(self.inner_alpha, self.zero_table.zeros)

    def __call__(self, t):
        t_in = np.asarray(t, dtype=float)
        tt = np.abs(np.atleast_1d(t_in)).astype(float)
        val = self._quotient(tt)
        if self.power == 2:
            val = val * np.asarray(j_norm(self.inner_alpha, tt))
        if self.prefactor_exponent:
            val = val * tt ** self.prefactor_exponent
        return val.reshape(t_in.shape) if t_in.ndim else float(val[0])

    def series(self, nterms: int) -> np.ndarray:
        """Coefficients c_i with f(t) = sum_i c_i t**(2i) near the origin."""
        beta = self.inner_alpha
        shift = self.prefactor_exponent // 2
        n = nterms
        s = series_coefficients(beta, n)
        num = np.convolve(s, s)[:n] if self.power == 2 else s
        for qk in self.zero_table.zeros:
            geom = (1.0 / qk**2) ** np.arange(n)
            num = np.convolve(num, geom)[:n]
        out = np.zeros(n)
        if shift < n:
            out[shift:] = num[: n - shift]
        return out

    def origin_derivative(self, order: int) -> float:
        """f^{(order)}(0), exact from the power series."""
        if order % 2:
            return 0.0
        return math.factorial(order) * float(self.series(order // 2 + 1)[order // 2])

    def profile(self) -> RadialProfile:
        return RadialProfile(self, decay_exponent=self.decay_exponent, period=self.period,
                             name=self.label())

    def label(self) -> str:
        a = self.order.alpha
        if self.variant is Variant.UNCERT_I:
            return f"t^{2 * self.s + 2} f_({self.inner_alpha},{self.m})"
        if self.variant is Variant.UNCERT_III:
            return f"f_({self.inner_alpha},{self.m})"
        return f"{self.variant.value}_({a},{self.m})"


def sign_change_scan(func: Callable, lo: float, hi: float, *, step: float = 0.01, tol: float = 1e-12) -> float:
    """sup{x in [lo, hi] : func(x) > 0}, assuming func <= 0 from there up to hi.

    Values below 1e-13 of the window maximum are treated as rounding noise
    when locating the last positive sample; the crossing is then bisected to tol.
    """
    grid = np.arange(lo, hi + step, step)
    vals = np.asarray(func(grid), dtype=float)
    if vals[-1] > 0:
        raise ValueError(f"function still positive at the end of the scan window [{lo}, {hi}]")
    floor = 1e-13 * float(np.max(np.abs(vals))) if vals.size else 0.0
    pos = np.nonzero(vals > floor)[0]
    if pos.size == 0:
        raise ValueError(f"no positive values in the scan window [{lo}, {hi}]")
    i = int(pos[-1]) + 1
    while vals[i] > 0:
        i += 1
    a, b = float(grid[i - 1]), float(grid[i])
    while b - a > tol:
        mid = 0.5 * (a + b)
        if float(np.asarray(func(np.array([mid])))[0]) > 0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def last_sign_change(ef: ExtremalFunction, m_sign: int) -> float:
    """lambda((-1)**m_sign f): the last point where (-1)**m_sign f is positive.

    Beyond q_{m+1} every denominator factor has sign -1, so (-1)**m f carries
    the fixed sign of -j**2 <= 0; the tail is therefore certified by the
    factorization and only [0, q_{m+1} + 50] is scanned.
    """
    if ef.variant is Variant.G:
        raise ValueError("g_{alpha,m} changes sign at every zero of j_alpha; lambda(g) is infinite")
    if (m_sign - ef.m) % 2:
        raise ValueError(f"(-1)^{m_sign} f is positive on an unbounded set (m = {ef.m}); no last sign change")
    sign = -1.0 if m_sign % 2 else 1.0
    hi = ef.zero_table.q(ef.m + 1) + 50.0
    return sign_change_scan(lambda t: sign * ef(t), 0.0, hi)


@dataclass(frozen=True)
class ProductCertificate:
    value: float
    certificate: float
    extremizer: ExtremalFunction

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.certificate)


def logan_product(order, m: int) -> ProductCertificate:
    """The optimal Logan product 2 q_{alpha,m+1}, recomputed from the sign change of f_{alpha,m}."""
    ef = ExtremalFunction(order, m, Variant.F)
    value = 2.0 * ef.zero_table.q(m + 1)
    cert = last_sign_change(ef, m) * ef.type_
    return ProductCertificate(value, cert, ef)


@dataclass(frozen=True)
class MomentReport:
    order: Order
    m: int
    ks: tuple[int, ...]
    values: tuple[float, ...]
    scale: tuple[float, ...]
    errors: tuple[float, ...] = field(default=())
    gauss_values: tuple[float, ...] = field(default=())

    def relative(self) -> tuple[float, ...]:
        return tuple(abs(v) / s if s else abs(v) for v, s in zip(self.values, self.scale))


def _moment(ef_eval, alpha: float, k: int, decay: float, period: float, absolute: bool, breaks):
    b = b_const(alpha)
    if absolute:
        def g(t):
            return b * t ** (2 * k) * np.abs(ef_eval(t))
    else:
        def g(t):
            return b * t ** (2 * k) * ef_eval(t)
    total = decay - 2 * k - (2 * alpha + 1)
    if total <= 1.0:
        raise ValueError(
            f"moment k={k} not integrable: |f| ~ t^-{decay:g}, so t^(2k) f t^(2alpha+1) ~ t^-{total:g}")
    return infinite_integral(g, origin_exp=2 * alpha + 1, decay=total, period=period, breakpoints=breaks)


def moments(ef, k_max: int | None = None, *, ks=None, alpha: float | None = None) -> MomentReport:
    """int lambda^(2k) f d nu_alpha for k in ks (default 0..k_max).

    ef is an ExtremalFunction or a RadialProfile; alpha defaults to the
    function's own order. For extremal functions the Gauss route is reported
    alongside the direct oscillatory quadrature.
    """
    if ks is None:
        ks = range(0, (k_max if k_max is not None else 0) + 1)
    ks = tuple(int(k) for k in ks)
    if isinstance(ef, ExtremalFunction):
        alpha = ef.order.alpha if alpha is None else alpha
        decay, period = ef.decay_exponent, ef.period
        breaks = tuple(ef.zero_table.zeros.tolist())
        m = ef.m
        evaluator = ef
    else:
        prof: RadialProfile = ef
        if alpha is None:
            raise ValueError("alpha is required for a plain profile")
        m = 0
        evaluator = prof
        if prof.compact:
            from .integrate import adaptive_quad

            vals, scales, errs = [], [], []
            b = b_const(alpha)
            for k in ks:
                v, e = adaptive_quad(lambda t: b * t ** (2 * k) * prof(t), 0.0, prof.support_bound,
                                     left_exp=2 * alpha + 1, breakpoints=prof.all_breakpoints())
                a, _ = adaptive_quad(lambda t: b * t ** (2 * k) * np.abs(prof(t)), 0.0, prof.support_bound,
                                     left_exp=2 * alpha + 1, breakpoints=prof.all_breakpoints())
                vals.append(float(v))
                scales.append(float(a))
                errs.append(float(e))
            return MomentReport(as_order(alpha), m, ks, tuple(vals), tuple(scales), tuple(errs))
        if prof.decay_exponent is None:
            raise ValueError("profile must declare a support bound or a decay exponent")
        decay, period, breaks = prof.decay_exponent, prof.period, prof.all_breakpoints()
    vals, scales, errs = [], [], []
    for k in ks:
        r = _moment(evaluator, alpha, k, decay, period, False, ())
        a = _moment(evaluator, alpha, k, decay, period, True, breaks)
        vals.append(float(r.value))
        scales.append(float(a.value))
        errs.append(float(r.error))
    gauss = ()
    if isinstance(ef, ExtremalFunction) and ef.type_ <= 2.0 and alpha == ef.order.alpha:
        from .quadrature import apply_gauss, gauss_rule

        rule = gauss_rule(alpha, 2.0, 64)
        gauss = tuple(
            apply_gauss(rule, lambda t, k=k: t ** (2 * k) * ef(t), decay=decay - 2 * k).value for k in ks)
    return MomentReport(as_order(alpha), m, ks, tuple(vals), tuple(scales), tuple(errs), gauss)


def uncertainty_product(order, m: int, s: int, variant: str = "I") -> tuple[float, ExtremalFunction]:
    """Optimal product and extremizer of the uncertainty problems (radial case).

    variant "I":   2 q_{alpha+s+1,m+1} with lambda^(2s+2) f_{alpha+s+1,m}
    variant "III": 2 q_{alpha+s,m+1}   with f_{alpha+s,m}
    """
    order = as_order(order)
    v = str(variant).upper()
    if v in ("I", "UNCERT_I"):
        ef = ExtremalFunction(order, m, Variant.UNCERT_I, s)
    elif v in ("III", "UNCERT_III"):
        ef = ExtremalFunction(order, m, Variant.UNCERT_III, s)
    else:
        raise ValueError(f"unknown uncertainty variant {variant!r}; expected 'I' or 'III'")
    return 2.0 * ef.zero_table.q(m + 1), ef


@dataclass(frozen=True)
class UncertaintyCertificate:
    product: float
    sign_change_product: float
    origin_derivatives: tuple[float, ...]
    moments: MomentReport

    def ok(self, tol_product: float = 1e-8, tol_moment: float = 1e-7, tol_origin: float = 1e-12) -> bool:
        return (abs(self.product - self.sign_change_product) <= tol_product
                and all(abs(d) <= tol_origin for d in self.origin_derivatives)
                and all(r <= tol_moment for r in self.moments.relative()))


def uncertainty_certificate(order, m: int, s: int, variant: str = "I") -> UncertaintyCertificate:
    """Recompute the product from the extremizer and check its side conditions."""
    value, ef = uncertainty_product(order, m, s, variant)
    cert = last_sign_change(ef, m) * ef.type_
    alpha = as_order(order).alpha
    if ef.variant is Variant.UNCERT_I:
        origin = tuple(ef.origin_derivative(2 * l) for l in range(s + 1))
        ks = tuple(range(0, m + 1))
    else:
        origin = ()
        ks = tuple(range(s, m + s + 1))
    rep = moments(ef, ks=ks, alpha=alpha)
    return UncertaintyCertificate(value, cert, origin, rep)


def dunkl_radial_product(d: int, kappa_sum: float, m: int, s: int = 0, variant: str = "logan") -> float:
    """Radial reduction of the Dunkl problems to Hankel order d/2 - 1 + kappa_sum."""
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    if kappa_sum < 0:
        raise ValueError("kappa_sum must be nonnegative")
    alpha = d / 2.0 - 1.0 + kappa_sum
    v = str(variant).lower()
    if v == "logan":
        return 2.0 * zeros(alpha, m + 1).q(m + 1)
    return uncertainty_product(alpha, m, s, v.upper())[0]
