"""The measure nu_alpha, the Hankel transform, Sonine lowering, generalized
translation and convolution on the half line."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .bessel import Order, as_order, b_const, j_norm
from .integrate import adaptive_quad, gauss_jacobi, infinite_integral

__all__ = [
    "Measure",
    "RadialProfile",
    "hankel_transform",
    "inverse_check",
    "sonine_lower",
    "sonine_kernel_check",
    "translate",
    "convolve",
    "gram_matrix",
    "psd_floor",
    "psd_gram",
]


@dataclass(frozen=True)
class Measure:
    """d nu_alpha(t) = b_alpha t**(2 alpha + 1) dt."""

    order: Order

    def __init__(self, order):
        object.__setattr__(self, "order", as_order(order))

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def b_alpha(self) -> float:
        return b_const(self.alpha)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return self.b_alpha * t ** (2.0 * self.alpha + 1.0)

    def translation_constant(self) -> float:
        """c_alpha = Gamma(alpha+1) / (Gamma(1/2) Gamma(alpha+1/2)), alpha > -1/2."""
        a = self.alpha
        return math.exp(special.gammaln(a + 1.0) - special.gammaln(0.5) - special.gammaln(a + 0.5))


@dataclass(frozen=True)
class RadialProfile:
    """A function on [0, inf) described well enough to be integrated.

    evaluator    vectorized callable
    support_bound  f vanishes beyond it (inf allowed)
    decay_exponent d with f(t) = O(t**-d); inf for faster-than-polynomial decay
    period       period of the oscillating part of f, if it oscillates
    breakpoints  points where f is not smooth
    indicator_radius  set when f is the indicator of [0, a]; enables closed forms
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support_bound: float = math.inf
    decay_exponent: float | None = None
    period: float | None = None
    breakpoints: tuple[float, ...] = ()
    indicator_radius: float | None = None
    name: str = field(default="", compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(np.abs(t)), dtype=float)
        if math.isfinite(self.support_bound):
            out = np.where(np.abs(t) <= self.support_bound, out, 0.0)
        return out if out.ndim else float(out)

    @property
    def compact(self) -> bool:
        return math.isfinite(self.support_bound)

    def all_breakpoints(self) -> tuple[float, ...]:
        pts = set(self.breakpoints)
        if self.compact:
            pts.add(self.support_bound)
        return tuple(sorted(p for p in pts if p > 0))

    def dilate(self, a: float) -> "RadialProfile":
        """t -> f(a t)."""
        ev = self.evaluator
        return RadialProfile(
            lambda t: ev(a * np.asarray(t, dtype=float)),
            support_bound=self.support_bound / a,
            decay_exponent=self.decay_exponent,
            period=None if self.period is None else self.period / a,
            breakpoints=tuple(p / a for p in self.breakpoints),
            indicator_radius=None if self.indicator_radius is None else self.indicator_radius / a,
            name=f"{self.name}({a}*t)",
        )

    @classmethod
    def indicator(cls, a: float = 1.0) -> "RadialProfile":
        return cls(lambda t: np.ones_like(np.asarray(t, dtype=float)), support_bound=a,
                   decay_exponent=math.inf, indicator_radius=a, name=f"chi[0,{a}]")

    @classmethod
    def gaussian(cls) -> "RadialProfile":
        """exp(-t**2/2), a fixed point of every H_alpha."""
        return cls(lambda t: np.exp(-0.5 * np.asarray(t, dtype=float) ** 2),
                   decay_exponent=math.inf, name="gaussian")

    @classmethod
    def bessel(cls, order, lam: float) -> "RadialProfile":
        """t -> j_alpha(lam t)."""
        alpha = as_order(order).alpha
        return cls(lambda t: j_norm(alpha, lam * np.asarray(t, dtype=float)),
                   decay_exponent=alpha + 0.5, period=2.0 * math.pi / lam if lam else None,
                   name=f"j_{alpha}({lam}t)")

    @classmethod
    def zero(cls) -> "RadialProfile":
        return cls(lambda t: np.zeros_like(np.asarray(t, dtype=float)), support_bound=1.0,
                   decay_exponent=math.inf, name="0")


def _finite_transform(alpha: float, f: RadialProfile, lam: np.ndarray, upper: float, rtol: float):
    lam_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    npan = max(1, int(math.ceil(upper * lam_max / math.pi)))
    cuts = set(np.linspace(0.0, upper, npan + 1)[1:-1].tolist())
    cuts.update(p for p in f.all_breakpoints() if p < upper)
    b = b_const(alpha)

    def integrand(t):
        return (b * f(t))[:, None] * j_norm(alpha, np.outer(t, lam))

    val, _ = adaptive_quad(integrand, 0.0, upper, left_exp=2.0 * alpha + 1.0,
                           breakpoints=sorted(cuts), rtol=rtol, atol=1e-16)
    return np.asarray(val).reshape(lam.shape)


def hankel_transform(measure: Measure, f: RadialProfile, lam, *, rtol: float = 1e-11):
    """H_alpha(f)(lam) = int_0^inf f(t) j_alpha(lam t) d nu_alpha(t); vectorized in lam."""
    alpha = measure.alpha
    lam_arr = np.abs(np.atleast_1d(np.asarray(lam, dtype=float)))
    if f.compact:
        out = _finite_transform(alpha, f, lam_arr, f.support_bound, rtol)
    elif f.decay_exponent is None:
        raise ValueError(f"profile {f.name or f.evaluator!r} has neither a support bound nor a decay exponent")
    elif math.isinf(f.decay_exponent):
        b = b_const(alpha)
        res = infinite_integral(
            lambda t: (b * f(t))[:, None] * j_norm(alpha, np.outer(t, lam_arr)),
            origin_exp=2.0 * alpha + 1.0, period=f.period or 1.0, breakpoints=f.all_breakpoints(),
        )
        out = np.atleast_1d(res.value)
    else:
        out = np.array([_decaying_transform(alpha, f, float(x)) for x in lam_arr])
    return out if np.ndim(lam) else float(out[0])


def _decaying_transform(alpha: float, f: RadialProfile, lam: float) -> float:
    d = f.decay_exponent
    total = d - (2.0 * alpha + 1.0)
    if lam > 0:
        if f.period is not None:
            raise ValueError("transform of an oscillating profile at lam > 0 mixes two frequencies; "
                             "the period-aligned tail extrapolation does not apply")
        total += alpha + 0.5
        period = 2.0 * math.pi / lam
    else:
        period = f.period or 2.0 * math.pi
    oscillatory = lam > 0
    lowest = 0.0 if oscillatory else 1.0
    if total <= lowest:
        raise ValueError(f"f(t) j_alpha(lam t) t^(2alpha+1) decays like t^-{total:g}: not integrable "
                         f"(need decay_exponent > {d - total + lowest:g})")
    b = b_const(alpha)
    res = infinite_integral(lambda t: b * f(t) * j_norm(alpha, lam * t), origin_exp=2.0 * alpha + 1.0,
                            decay=total, period=period, breakpoints=f.all_breakpoints(),
                            oscillatory=oscillatory)
    return float(res.value)


def inverse_check(measure: Measure, f: RadialProfile, grid, *, transform: RadialProfile | None = None) -> float:
    """max over grid of |H_alpha(H_alpha f) - f|.

    transform, when given, is a profile for H_alpha(f) (a closed form, say);
    otherwise H_alpha(f) is computed numerically and assumed to decay fast.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if transform is None:
        transform = RadialProfile(lambda lam: hankel_transform(measure, f, lam),
                                  decay_exponent=math.inf, name=f"H({f.name})")
    back = np.atleast_1d(hankel_transform(measure, transform, grid))
    return float(np.max(np.abs(back - f(grid)))) if grid.size else 0.0


def sonine_lower(measure_alpha: Measure, measure_beta: Measure, Hbeta_f: RadialProfile, t: float) -> float:
    """H_alpha(f)(t) from H_beta(f) through the one-dimensional Sonine kernel, beta > alpha."""
    alpha, beta = measure_alpha.alpha, measure_beta.alpha
    if not beta > alpha:
        raise ValueError(f"Sonine lowering needs beta > alpha, got alpha={alpha}, beta={beta}")
    e = beta - alpha - 1.0
    const = 1.0 / (2.0 ** e * math.gamma(beta - alpha))
    t = float(t)
    H = Hbeta_f
    if H.compact and t >= H.support_bound:
        return 0.0
    # s = t + x; the kernel s (s^2 - t^2)^e = (t+x) (2t+x)^e x^e
    def g(x):
        s = t + x
        return s * (2.0 * t + x) ** e * H(s) if t > 0 else H(s)

    # at t = 0 the whole kernel s^(1+2e) goes into the endpoint weight
    lead = e if t > 0 else 1.0 + 2.0 * e
    pts = [p - t for p in H.all_breakpoints() if p > t]
    if H.compact:
        val, _ = adaptive_quad(g, 0.0, H.support_bound - t, left_exp=lead, breakpoints=pts, rtol=1e-13)
    else:
        if H.decay_exponent is None:
            raise ValueError("H_beta(f) must be compactly supported or declare a decay exponent")
        # H_beta(f) oscillates about zero when it declares a period
        decay = H.decay_exponent - 1.0 - 2.0 * e
        res = infinite_integral(g, origin_exp=lead, decay=decay, period=H.period, breakpoints=pts,
                                oscillatory=H.period is not None)
        val = res.value
    return const * float(val)


def sonine_kernel_check(alpha: float, beta: float, lam) -> np.ndarray:
    """Right side of Sonine's first integral; equals j_beta(lam)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    e = beta - alpha - 1.0
    const = 1.0 / (b_const(beta) * 2.0 ** e * math.gamma(beta - alpha))
    b = b_const(alpha)
    val, _ = adaptive_quad(lambda t: (b * (1.0 + t) ** e)[:, None] * j_norm(alpha, np.outer(t, lam)), 0.0, 1.0,
                           left_exp=2.0 * alpha + 1.0, right_exp=e,
                           breakpoints=np.linspace(0, 1, int(lam.max() // 3) + 2)[1:-1], rtol=1e-14)
    return const * np.asarray(val).reshape(lam.shape)


def _indicator_translate(alpha: float, a: float, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """T^t chi_[0,a](x): the Beta(alpha+1/2, alpha+1/2) mass of {u : r(u) <= a}."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ustar = (x * x + t * t - a * a) / (2.0 * x * t)
    ustar = np.clip(np.nan_to_num(ustar, nan=0.0, posinf=2.0, neginf=-2.0), -1.0, 1.0)
    p = alpha + 0.5
    val = special.betainc(p, p, 0.5 * (1.0 - ustar))
    degenerate = (x == 0.0) | (t == 0.0)
    return np.where(degenerate, (np.maximum(x, t) <= a).astype(float), val)


def _smooth_translate(alpha: float, f: Callable, t: np.ndarray, x: np.ndarray, n: int) -> np.ndarray:
    """c_alpha int_{-1}^{1} f(r(u)) (1-u^2)^(alpha-1/2) du by an n-point Gauss-Jacobi rule."""
    u, w = gauss_jacobi(n, alpha - 0.5, alpha - 0.5)
    w = w / w.sum()  # normalized: c_alpha times the weight integrates to 1
    r2 = x[:, None] ** 2 + t[:, None] ** 2 - 2.0 * (x * t)[:, None] * u[None, :]
    r = np.sqrt(np.maximum(r2, 0.0))
    vals = np.asarray(f(r.ravel()), dtype=float).reshape(r.shape)
    return vals @ w


def translate(measure: Measure, t, f: RadialProfile, x, *, tol: float = 1e-13):
    """Generalized translation T^t f(x); vectorized over broadcast (t, x)."""
    alpha = measure.alpha
    t_arr, x_arr = np.broadcast_arrays(np.abs(np.asarray(t, dtype=float)), np.abs(np.asarray(x, dtype=float)))
    shape = t_arr.shape
    t_arr, x_arr = t_arr.ravel(), x_arr.ravel()
    if alpha == -0.5:
        out = 0.5 * (f(x_arr + t_arr) + f(np.abs(x_arr - t_arr)))
    elif f.indicator_radius is not None:
        out = _indicator_translate(alpha, f.indicator_radius, t_arr, x_arr)
    elif not f.all_breakpoints():
        out = _translate_smooth_converged(alpha, f, t_arr, x_arr, tol)
    else:
        out = np.array([_translate_piecewise(measure, f, ti, xi, tol) for ti, xi in zip(t_arr, x_arr)])
    out = np.asarray(out, dtype=float).reshape(shape)
    return out if out.ndim else float(out)


def _translate_smooth_converged(alpha, f, t, x, tol):
    # the integrand oscillates about 2 x t / (x + t) times per unit of u for type-2 profiles
    span = float(np.max(2.0 * x * t / np.maximum(x + t, 1e-300))) if x.size else 0.0
    n = 32 + 8 * int(math.ceil(span))
    prev = _smooth_translate(alpha, f, t, x, n)
    for _ in range(6):
        n *= 2
        cur = _smooth_translate(alpha, f, t, x, n)
        scale = max(1.0, float(np.max(np.abs(cur))))
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur
        prev = cur
    return cur


def _translate_piecewise(measure: Measure, f: RadialProfile, t: float, x: float, tol: float) -> float:
    if t == 0.0 or x == 0.0:
        return float(f(max(t, x)))
    alpha = measure.alpha
    c = measure.translation_constant()
    e = alpha - 0.5
    cuts = []
    for bp in f.all_breakpoints():
        u = (x * x + t * t - bp * bp) / (2.0 * x * t)
        if -1.0 < u < 1.0:
            cuts.append(u)

    def g(u):
        r = np.sqrt(np.maximum(x * x + t * t - 2.0 * x * t * u, 0.0))
        return f(r)

    val, _ = adaptive_quad(g, -1.0, 1.0, left_exp=e, right_exp=e, breakpoints=cuts, rtol=tol, atol=1e-16)
    return c * float(val)


def convolve(measure: Measure, f1: RadialProfile, f2: RadialProfile, x) -> float | np.ndarray:
    """(f1 *_alpha f2)(x) = int T^t f1(x) f2(t) d nu_alpha(t) for compactly supported profiles."""
    if not (f1.compact and f2.compact):
        raise ValueError("convolution is implemented for compactly supported profiles only")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    alpha = measure.alpha
    b = measure.b_alpha
    for i, xi in enumerate(np.abs(xs)):
        if xi >= f1.support_bound + f2.support_bound:
            out[i] = 0.0
            continue
        pts = set(f2.all_breakpoints())
        for bp in f1.all_breakpoints():
            pts.update({abs(xi - bp), xi + bp})
        upper = f2.support_bound

        def g(t, xi=xi):
            return b * translate(measure, t, f1, np.full_like(t, xi)) * f2(t)

        val, _ = adaptive_quad(g, 0.0, upper, left_exp=2.0 * alpha + 1.0,
                               breakpoints=sorted(p for p in pts if 0 < p < upper), rtol=1e-12, atol=1e-16)
        out[i] = float(val)
    return out if np.ndim(x) else float(out[0])


def gram_matrix(measure: Measure, f: RadialProfile, points: Sequence[float]) -> np.ndarray:
    """(T^{x_i} f(x_j))_{i,j}, symmetrized."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise ValueError("need at least one point")
    if len(np.unique(pts)) != len(pts):
        raise ValueError("points must be distinct")
    i, j = np.triu_indices(len(pts))
    vals = translate(measure, pts[i], f, pts[j])
    G = np.zeros((len(pts), len(pts)))
    G[i, j] = vals
    G[j, i] = vals
    return G


def psd_floor(G: np.ndarray, floor: float = 1e-8) -> float:
    """The PSD acceptance floor: -floor times max(1, spectral norm of G)."""
    return -floor * max(1.0, float(np.linalg.norm(G, 2)))


def psd_gram(measure: Measure, f: RadialProfile, points: Sequence[float]) -> float:
    """Smallest eigenvalue of the translation Gram matrix (T^{x_i} f(x_j))."""
    G = gram_matrix(measure, f, points)
    try:
        ev = np.linalg.eigvalsh(G)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"symmetric eigensolver did not converge: {exc}") from exc
    return float(ev[0])
