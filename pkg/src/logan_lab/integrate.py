"""Quadrature machinery shared by the transform, rule and extremal modules.

All integrands are vectorized: they receive a 1-d array of abscissae and
return either an array of the same length or a 2-d array whose columns are
independent integrands (one per transform argument, say).

Infinite oscillatory integrals are summed panel by panel at period-aligned
points and the remaining tail is removed by a generalized Richardson fit in
inverse powers of the cut-off, which is exact for integrands of the form
x**(-d) * (smooth periodic part) * (power series in 1/x).
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

__all__ = [
    "gauss_legendre",
    "gauss_jacobi",
    "panel_rule",
    "adaptive_quad",
    "richardson_limit",
    "InfiniteResult",
    "infinite_integral",
]

Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = special.roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight (1-s)**a (1+s)**b on [-1, 1]."""
    x, w = special.roots_jacobi(n, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a: float, b: float, n: int, left_exp: float = 0.0, right_exp: float = 0.0):
    """Nodes/weights integrating f(x) (x-a)**left_exp (b-x)**right_exp over [a, b]."""
    h = 0.5 * (b - a)
    if left_exp == 0.0 and right_exp == 0.0:
        s, w = gauss_legendre(n)
        return a + h * (s + 1.0), h * w
    s, w = gauss_jacobi(n, float(right_exp), float(left_exp))
    return a + h * (s + 1.0), w * h ** (1.0 + left_exp + right_exp)


def _apply(f: Integrand, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.ndim == 1:
        return w @ y
    return w @ y.reshape(len(x), -1)


@dataclass(order=True)
class _Panel:
    key: float
    a: float
    b: float
    le: float
    re: float
    value: np.ndarray
    err: float


def _eval_panel(f, a, b, le, re, n):
    x1, w1 = panel_rule(a, b, n, le, re)
    x2, w2 = panel_rule(a, b, 2 * n, le, re)
    v1 = _apply(f, x1, w1)
    v2 = _apply(f, x2, w2)
    err = float(np.max(np.abs(v2 - v1)))
    return _Panel(-err, a, b, le, re, v2, err)


def adaptive_quad(
    f: Integrand,
    a: float,
    b: float,
    *,
    left_exp: float = 0.0,
    right_exp: float = 0.0,
    breakpoints: Sequence[float] = (),
    rtol: float = 1e-12,
    atol: float = 1e-15,
    n: int = 16,
    max_panels: int = 4000,
):
    """Globally adaptive Gauss integration of f(x) (x-a)**left_exp (b-x)**right_exp.

    Returns (value, error_estimate); value is an array when f is multi-column.
    The endpoint weights are kept exact on the panels touching a and b.
    """
    if b <= a:
        return 0.0, 0.0
    cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    funcs = []
    entries = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        le = left_exp if lo == a else 0.0
        re = right_exp if hi == b else 0.0
        # endpoint factors away from their endpoint are smooth: fold them into f
        g = f
        if left_exp and lo != a:
            g = _fold(g, a, b, left_exp, 0.0)
        if right_exp and hi != b:
            g = _fold(g, a, b, 0.0, right_exp)
        funcs.append(g)
        entries.append((_eval_panel(g, lo, hi, le, re, n), len(funcs) - 1))
    heapq.heapify(entries)
    while True:
        total = sum(p.value for p, _ in entries)
        err = sum(p.err for p, _ in entries)
        scale = float(np.max(np.abs(total))) if np.ndim(total) else abs(total)
        if err <= max(atol, rtol * scale) or len(entries) >= max_panels:
            break
        worst, idx = heapq.heappop(entries)
        g = funcs[idx]
        mid = 0.5 * (worst.a + worst.b)
        if not (worst.a < mid < worst.b):  # pragma: no cover - interval exhausted
            heapq.heappush(entries, (_Panel(0.0, worst.a, worst.b, worst.le, worst.re, worst.value, 0.0), idx))
            continue
        # the endpoint weight stays exact on the outer half and is folded into f on the inner half
        gl = _fold(g, worst.a, worst.b, 0.0, worst.re)
        gr = _fold(g, worst.a, worst.b, worst.le, 0.0)
        funcs.extend([gl, gr])
        heapq.heappush(entries, (_eval_panel(gl, worst.a, mid, worst.le, 0.0, n), len(funcs) - 2))
        heapq.heappush(entries, (_eval_panel(gr, mid, worst.b, 0.0, worst.re, n), len(funcs) - 1))
    return total, err


def _fold(f: Integrand, a: float, b: float, le: float, re: float) -> Integrand:
    """f multiplied by the (now smooth) endpoint factors (x-a)**le (b-x)**re."""
    if not le and not re:
        return f

    def g(x):
        fac = (x - a) ** le * (b - x) ** re
        y = np.asarray(f(x), dtype=float)
        return y * (fac if y.ndim == 1 else fac[:, None])

    return g


def richardson_limit(x: np.ndarray, values: np.ndarray, p0: float, nterms: int):
    """Fit values ~ I + sum_{i<nterms} c_i x**(-p0-i) and return I (per column) and a spread estimate."""
    x = np.asarray(x, dtype=float)
    vals = np.asarray(values, dtype=float)
    flat = vals.reshape(len(x), -1)
    xs = x / x.max()

    def fit(k, sel):
        cols = [np.ones(sel.sum())] + [xs[sel] ** (-(p0 + i)) for i in range(k)]
        A = np.stack(cols, axis=1)
        coef, *_ = np.linalg.lstsq(A, flat[sel], rcond=None)
        return coef[0]

    everything = np.ones(len(x), dtype=bool)
    best = fit(nterms, everything)
    alt1 = fit(max(nterms - 1, 1), everything)
    half = np.zeros(len(x), dtype=bool)
    half[len(x) // 3:] = True
    alt2 = fit(max(nterms - 1, 1), half)
    spread = np.maximum(np.abs(best - alt1), np.abs(best - alt2))
    shape = vals.shape[1:]
    return best.reshape(shape), spread.reshape(shape)


@dataclass(frozen=True)
class InfiniteResult:
    value: float | np.ndarray
    error: float
    head: float | np.ndarray
    cutoff: float


def infinite_integral(
    f: Integrand,
    *,
    origin_exp: float = 0.0,
    decay: float = math.inf,
    period: float | None = None,
    breakpoints: Sequence[float] = (),
    start: float | None = None,
    rtol: float = 1e-12,
    panels: int = 240,
    n: int = 24,
    oscillatory: bool = False,
) -> InfiniteResult:
    """Integrate f(x) x**origin_exp over [0, inf).

    decay is the exponent d in |f(x) x**origin_exp| = O(x**-d); inf means
    faster than any power, in which case panels are summed until a panel
    contributes less than 1e-12 of the running total. For finite d the
    partial integrals at period-aligned cut-offs are extrapolated.
    oscillatory declares that the tail has no non-oscillating part (f times
    a single sinusoid); the tail then starts at x**-d and any d > 0 converges.
    """
    lowest = 0.0 if oscillatory else 1.0
    if not math.isinf(decay) and decay <= lowest:
        raise ValueError(f"integrand decays like x^-{decay}; not integrable at infinity")
    period = float(period) if period else 2.0 * math.pi
    x0 = max([0.0, *breakpoints]) if start is None else float(start)
    x0 = max(x0, period)
    head, herr = adaptive_quad(f, 0.0, x0, left_exp=origin_exp, breakpoints=breakpoints, rtol=rtol * 1e-2)
    xs, ws = gauss_legendre(n)
    h = 0.5 * period
    scalar = np.ndim(head) == 0
    acc = np.atleast_1d(np.asarray(head, dtype=float))

    def columns(x):
        y = np.asarray(f(x), dtype=float).reshape(len(x), -1)
        return y * (x**origin_exp)[:, None] if origin_exp else y

    def out(v):
        return float(v[0]) if scalar else v

    if math.isinf(decay):
        lo = x0
        quiet = 0
        for _ in range(100000):
            node = lo + h * (xs + 1.0)
            contrib = h * (ws @ columns(node))
            acc = acc + contrib
            lo += period
            small = np.all(np.abs(contrib) <= 1e-12 * np.maximum(np.abs(acc), 1e-300))
            quiet = quiet + 1 if small else 0
            if quiet >= 3:
                break
        return InfiniteResult(out(acc), float(herr), out(acc), lo)
    # period-aligned partial integrals, two Gauss panels per period
    q = 0.5 * h
    offsets = np.concatenate([q * (xs + 1.0), h + q * (xs + 1.0)])
    nodes = (x0 + period * np.arange(panels))[:, None] + offsets[None, :]
    y = columns(nodes.ravel()).reshape(panels, 2 * n, -1)
    per = q * np.einsum("pnk,n->pk", y, np.concatenate([ws, ws]))
    F = acc[None, :] + np.cumsum(per, axis=0)
    X = x0 + period * np.arange(1, panels + 1)
    sel = slice(panels // 2, panels, max(1, panels // 40))
    val, spread = richardson_limit(X[sel], F[sel], decay if oscillatory else decay - 1.0, 7)
    err = float(np.max(spread)) + float(herr)
    return InfiniteResult(out(val), err, out(F[-1]), float(X[-1]))
