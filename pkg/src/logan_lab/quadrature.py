"""Gauss and Radau quadrature at Bessel zeros for even entire functions of type tau.

For f in B_alpha^tau,

    (tau/2)^(2alpha+2) int f d nu_alpha = sum_k gamma_k f(2 q_{alpha,k} / tau)
                                        = sum_{l<r} alpha_{l,r} f^(2l)(0)
                                          + sum_k gamma_{k,r} f(2 q_{alpha+r,k} / tau).

Gauss weights are certified against the localized test functions
phi_k = j_alpha^2 / (1 - t^2/q_k^2)^2, which vanish doubly at every other
node, so gamma_k = int phi_k d nu_alpha / phi_k(q_k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from .bessel import Order, as_order, b_const, j_norm, j_norm_derivative, series_coefficients, zeros
from .integrate import infinite_integral, richardson_limit

__all__ = [
    "GaussRule",
    "RadauRule",
    "QuadratureResult",
    "gauss_rule",
    "gauss_weight_oracle",
    "apply_gauss",
    "radau_rule",
    "apply_radau",
    "bessel_square_moment",
    "even_derivative_at_zero",
]

ORACLE_NODES = 12
ORACLE_RTOL = 1e-8
MAX_RADAU_R = 3


@dataclass(frozen=True)
class GaussRule:
    """Nodes 2 q_{alpha,k} / tau and weights gamma_k (independent of tau).

    tail_bound is the truncation error of the rule for integrands bounded by
    lambda^-(2alpha+3) (the envelope of j_{alpha+1}^2), b_alpha (tau/2)^(2alpha+3) / q_count.
    """

    order: Order
    tau: float
    nodes: np.ndarray
    weights: np.ndarray
    count: int
    tail_bound: float
    oracle_discrepancy: float


@dataclass(frozen=True)
class RadauRule:
    order: Order
    tau: float
    r: int
    origin_weights: np.ndarray
    nodes: np.ndarray
    node_weights: np.ndarray
    count: int


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    partial_sum: float
    tail_estimate: float


def _closed_form_weights(alpha: float, q: np.ndarray) -> np.ndarray:
    """gamma_k = 2 / (b_alpha j_alpha'(q_k)^2), from Parseval and the Lommel integral."""
    dj = np.asarray(j_norm_derivative(alpha, q, 1), dtype=float)
    return 2.0 / (b_const(alpha) * dj * dj)


def gauss_weight_oracle(order, k: int) -> float:
    """gamma_k from the localized test function phi_k (direct oscillatory integral)."""
    from .extremal import BesselQuotient

    alpha = as_order(order).alpha
    qk = zeros(alpha, k).q(k)
    quot = BesselQuotient(alpha, [qk])
    b = b_const(alpha)
    res = infinite_integral(lambda t: b * quot(t) ** 2, origin_exp=2 * alpha + 1, decay=4.0, period=math.pi,
                            start=qk + math.pi)
    phi_at_node = (qk * float(j_norm_derivative(alpha, qk, 1))) ** 2 / 4.0
    return float(res.value) / phi_at_node


@lru_cache(maxsize=64)
def _gauss_cached(alpha: float, count: int) -> tuple[np.ndarray, np.ndarray, float]:
    q = zeros(alpha, count).zeros
    w = _closed_form_weights(alpha, q)
    worst = 0.0
    for k in range(1, min(count, ORACLE_NODES) + 1):
        oracle = gauss_weight_oracle(alpha, k)
        worst = max(worst, abs(oracle - w[k - 1]) / w[k - 1])
    if worst > ORACLE_RTOL:
        raise RuntimeError(f"Gauss weights for alpha={alpha} disagree with the phi_k oracle (rel {worst:.2e})")
    if np.any(w <= 0):
        raise RuntimeError(f"non-positive Gauss weight for alpha={alpha}")
    w.setflags(write=False)
    return q, w, worst


def gauss_rule(order, tau: float = 2.0, count: int = 64) -> GaussRule:
    order = as_order(order)
    if count < 1:
        raise ValueError("count must be >= 1")
    if not tau > 0:
        raise ValueError("tau must be positive")
    q, w, worst = _gauss_cached(order.alpha, int(count))
    alpha = order.alpha
    nodes = 2.0 * q / tau
    nodes.setflags(write=False)
    tail = b_const(alpha) * (tau / 2.0) ** (2 * alpha + 3) / q[-1]
    return GaussRule(order, float(tau), nodes, w, int(count), float(tail), float(worst))


def _extrapolated_sum(terms: np.ndarray, x: np.ndarray, p0: float | None) -> QuadratureResult:
    partial = np.cumsum(terms)
    total = float(partial[-1])
    if p0 is None or p0 <= 0 or len(terms) < 16:
        tail = float(abs(terms[-1]) * len(terms))
        return QuadratureResult(total, total, tail)
    n = len(terms)
    idx = np.unique(np.linspace(n // 2, n - 1, 24).astype(int))
    val, spread = richardson_limit(x[idx], partial[idx], p0, 6)
    val = float(val)
    return QuadratureResult(val, total, abs(val - total) + float(spread))


def apply_gauss(rule: GaussRule, f: Callable, *, decay: float | None = None) -> QuadratureResult:
    """sum_k gamma_k f(node_k), approximating (tau/2)^(2alpha+2) int f d nu_alpha.

    decay (|f(t)| = O(t^-decay)) enables Richardson extrapolation of the
    truncated node sum. Outside B_alpha^tau the result carries no contract.
    """
    vals = np.asarray(f(rule.nodes), dtype=float)
    terms = rule.weights * vals
    p0 = None if decay is None else decay - 2.0 * rule.order.alpha - 2.0
    return _extrapolated_sum(terms, rule.nodes, p0)


def bessel_square_moment(beta: float, gamma: float) -> float:
    """int_0^inf j_beta(t)^2 d nu_gamma(t), closed form (Weber-Schafheitlin), beta > gamma."""
    s = 2.0 * beta - 2.0 * gamma - 1.0
    if not (0 < s < 2 * beta + 1):
        raise ValueError("integral diverges")
    logv = (special.gammaln(s) + special.gammaln(beta + 0.5 * (1 - s)) - s * math.log(2.0)
            - 2 * special.gammaln(0.5 * (1 + s)) - special.gammaln(beta + 0.5 * (1 + s)))
    # j_beta^2 = (2^beta Gamma(beta+1))^2 t^-2beta J_beta^2
    logc = 2 * (beta * math.log(2.0) + special.gammaln(beta + 1.0))
    return b_const(gamma) * math.exp(logv + logc)


def _radau_moment(alpha: float, r: int, j: int) -> tuple[float, float]:
    """M_j = int j_{alpha+r}^2 lambda^(2j) d nu_alpha, numerically and in closed form."""
    b = b_const(alpha)
    beta = alpha + r
    res = infinite_integral(lambda t: b * j_norm(beta, t) ** 2 * t ** (2 * j), origin_exp=2 * alpha + 1,
                            decay=2.0 * (r - j), period=math.pi)
    closed = b / b_const(alpha + j) * bessel_square_moment(beta, alpha + j)
    return float(res.value), closed


def _inverse_square_series(beta: float, n: int) -> np.ndarray:
    """Coefficients eta_i of j_beta^-2 = sum eta_i t^(2i)."""
    s = series_coefficients(beta, n)
    sq = np.convolve(s, s)[:n]
    eta = np.zeros(n)
    eta[0] = 1.0 / sq[0]
    for i in range(1, n):
        eta[i] = -np.dot(sq[1 : i + 1], eta[i - 1 :: -1]) / sq[0]
    return eta


@lru_cache(maxsize=64)
def _radau_cached(alpha: float, r: int, count: int):
    beta = alpha + r
    q, gam, _ = _gauss_cached(beta, count)
    node_w = b_const(alpha) / b_const(beta) * gam * q ** (-2.0 * r)
    eta = _inverse_square_series(beta, r)
    M = []
    for j in range(r):
        numeric, closed = _radau_moment(alpha, r, j)
        if abs(numeric - closed) > 1e-8 * abs(closed):
            raise RuntimeError(f"Radau moment M_{j} (alpha={alpha}, r={r}): quadrature {numeric} vs closed form {closed}")
        M.append(closed)
    origin = np.array([sum(M[j] * eta[j - l] for j in range(l, r)) / math.factorial(2 * l) for l in range(r)])
    if not origin[r - 1] > 0:
        raise RuntimeError(f"alpha_(r-1,r) = {origin[r - 1]} is not positive")
    if np.any(node_w <= 0):
        raise RuntimeError("non-positive Radau node weight")
    return q, node_w, origin


def radau_rule(order, tau: float = 2.0, r: int = 1, count: int = 64) -> RadauRule:
    """Radau-type rule with derivative terms at the origin, obtained from the Gauss rule at order alpha+r."""
    order = as_order(order)
    if not 1 <= r <= MAX_RADAU_R:
        raise ValueError(f"Radau rules are supported for 1 <= r <= {MAX_RADAU_R}, got r={r}")
    q, node_w, origin = _radau_cached(order.alpha, int(r), int(count))
    # f(2 lambda / tau) has 2l-th derivative (2/tau)^(2l) f^(2l)
    scale = (2.0 / tau) ** (2 * np.arange(r))
    return RadauRule(order, float(tau), int(r), origin * scale, 2.0 * q / tau, node_w, int(count))


def even_derivative_at_zero(f: Callable, order: int, h: float = 0.2) -> float:
    """f^(order)(0) for an even smooth f: central differences with Richardson extrapolation (order 8)."""
    if order == 0:
        return float(np.asarray(f(np.array([0.0])))[0])
    coeffs = [(-1) ** i * math.comb(order, i) for i in range(order + 1)]

    def diff(step):
        pts = np.array([(order / 2.0 - i) * step for i in range(order + 1)])
        return float(np.dot(coeffs, np.asarray(f(pts), dtype=float))) / step**order

    table = [diff(h / 2**i) for i in range(4)]
    for level in range(1, 4):
        fac = 4.0**level
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0) for i in range(len(table) - 1)]
    return table[0]


def apply_radau(rule: RadauRule, f: Callable, *, derivatives=None, decay: float | None = None) -> QuadratureResult:
    """sum_l alpha_{l,r} f^(2l)(0) + sum_k gamma_{k,r} f(node_k).

    derivatives: f^(2l)(0) for l < r; taken from f.origin_derivative when
    available, else estimated by extrapolated finite differences.
    """
    r = rule.r
    if derivatives is None:
        if hasattr(f, "origin_derivative"):
            derivatives = [f.origin_derivative(2 * l) for l in range(r)]
        else:
            derivatives = [even_derivative_at_zero(f, 2 * l) for l in range(r)]
    origin = float(np.dot(rule.origin_weights, np.asarray(derivatives, dtype=float)))
    terms = rule.node_weights * np.asarray(f(rule.nodes), dtype=float)
    p0 = None if decay is None else decay - 2.0 * rule.order.alpha - 2.0
    res = _extrapolated_sum(terms, rule.nodes, p0)
    return QuadratureResult(res.value + origin, res.partial_sum + origin, res.tail_estimate)
