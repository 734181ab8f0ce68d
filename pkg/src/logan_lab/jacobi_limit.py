"""Ultraspherical polynomials on [-1, 1] and their Mehler-Heine limit.

R_n = P_n^(alpha,alpha) / P_n^(alpha,alpha)(1) satisfies

    (n + 2 lam) R_{n+1}(x) = 2 (n + lam) x R_n(x) - n R_{n-1}(x),   lam = alpha + 1/2,

and the interval translation

    tau^theta f(rho) = c_alpha int_0^pi f(theta rho + sqrt(1-theta^2) sqrt(1-rho^2) cos phi) sin^(2 alpha) phi d phi

has the product formula tau^theta R_n(rho) = R_n(theta) R_n(rho). Dividing R_n
by its k largest zeros leaves a polynomial with nonnegative coefficients in
the R_s basis, so its translation Gram matrices are positive semidefinite;
near x = 1 these matrices converge to translation Grams of g_k on the half line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import linalg, special

from .bessel import as_order, zeros
from .hankel import Measure, RadialProfile, gram_matrix

__all__ = [
    "MAX_DEGREE",
    "JacobiPoly",
    "DividedPoly",
    "TailCertificate",
    "jacobi_eval",
    "jacobi_table",
    "jacobi_zeros",
    "divided_poly",
    "translate_interval",
    "interval_gram",
    "gram_psd_interval",
    "g_k",
    "mehler_heine_check",
    "zero_scaling_check",
    "gram_limit_check",
    "tail_certificate",
]

MAX_DEGREE = 400
NEGATIVE_REL = 1e-10
RECONSTRUCTION_TOL = 1e-10


def jacobi_table(alpha: float, n: int, x) -> np.ndarray:
    """Rows R_0(x), ..., R_n(x) by the normalized three-term recurrence."""
    alpha = as_order(alpha).alpha
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lam = alpha + 0.5
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for s in range(1, n):
        out[s + 1] = (2.0 * (s + lam) * x * out[s] - s * out[s - 1]) / (s + 2.0 * lam)
    return out


def jacobi_eval(alpha: float, n: int, x):
    """R_n^(alpha)(x), normalized so that R_n(1) = 1."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    val = jacobi_table(alpha, n, x)[n]
    return val if np.ndim(x) else float(val[0])


def _derivative(alpha: float, n: int, x):
    """R_n' = n (n + 2 alpha + 1) / (2 (alpha + 1)) R_{n-1}^(alpha+1)."""
    if n == 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return n * (n + 2 * alpha + 1) / (2 * (alpha + 1)) * jacobi_table(alpha + 1, n - 1, x)[n - 1]


@lru_cache(maxsize=128)
def _zeros_cached(alpha: float, n: int) -> np.ndarray:
    if n == 0:
        return np.empty(0)
    # monic recurrence x p_k = p_{k+1} + beta_k p_{k-1}
    k = np.arange(2, n, dtype=float)
    beta = np.concatenate([[1.0 / (2 * alpha + 3)], k * (k + 2 * alpha) / (4 * (k + alpha + 0.5) * (k + alpha - 0.5))])
    beta = beta[: n - 1]
    x = linalg.eigh_tridiagonal(np.zeros(n), np.sqrt(beta), eigvals_only=True)
    for _ in range(3):
        x = x - jacobi_table(alpha, n, x)[n] / _derivative(alpha, n, x)
    x = np.sort(0.5 * (x - x[::-1]))  # exact symmetry about 0
    x.setflags(write=False)
    return x


def jacobi_zeros(alpha: float, n: int) -> np.ndarray:
    """Zeros of R_n in increasing order: r_n < ... < r_1."""
    return _zeros_cached(as_order(alpha).alpha, int(n))


@dataclass(frozen=True)
class JacobiPoly:
    alpha: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_order(self.alpha).alpha)
        if self.n < 0:
            raise ValueError("degree must be nonnegative")

    def __call__(self, x):
        return jacobi_eval(self.alpha, self.n, x)

    def derivative(self, x):
        return _derivative(self.alpha, self.n, np.asarray(x, dtype=float))

    @property
    def zeros(self) -> np.ndarray:
        return jacobi_zeros(self.alpha, self.n)

    def r(self, i: int) -> float:
        """The i-th largest zero r_{i,n}."""
        if not 1 <= i <= self.n:
            raise IndexError(f"zero index {i} outside 1..{self.n}")
        return float(self.zeros[self.n - i])


@dataclass(frozen=True)
class DividedPoly:
    """p_{n-k} = R_n / ((x - r_1) ... (x - r_k)) = sum_s a_s R_s."""

    alpha: float
    n: int
    k: int
    coefficients: np.ndarray
    reconstruction_error: float

    @property
    def degree(self) -> int:
        return self.n - self.k

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coefficients)))

    @property
    def min_relative(self) -> float:
        return float(np.min(self.coefficients)) / self.scale

    def basis(self, x) -> np.ndarray:
        return jacobi_table(self.alpha, self.degree, x)

    def __call__(self, x):
        val = self.coefficients @ self.basis(x)
        return val if np.ndim(x) else float(val[0])


def divided_poly(alpha: float, n: int, k: int) -> DividedPoly:
    """Expansion of R_n / prod_{i<=k}(x - r_i) by Gauss-Jacobi projection at n+1 nodes."""
    alpha = as_order(alpha).alpha
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    top = jacobi_zeros(alpha, n)[n - k:]
    x, w = special.roots_jacobi(n + 1, alpha, alpha)
    Rn = jacobi_table(alpha, n, x)
    vals = Rn[n] / np.prod(x[:, None] - top[None, :], axis=1)
    basis = Rn[: n - k + 1]
    a = (basis * w) @ vals / ((basis**2) @ w)
    # backward check on a grid: p times the removed factors must give R_n back
    grid = np.concatenate([np.linspace(-1.0, 1.0, 401), 1.0 - np.geomspace(1e-6, 1e-2, 100)])
    expanded = a @ jacobi_table(alpha, n - k, grid)
    removed = np.prod(grid[:, None] - top[None, :], axis=1)
    scale = max(1.0, float(np.max(np.abs(expanded)) * np.max(np.abs(removed))))
    err = float(np.max(np.abs(expanded * removed - jacobi_eval(alpha, n, grid)))) / scale
    if err > RECONSTRUCTION_TOL:
        raise RuntimeError(f"divided polynomial (alpha={alpha}, n={n}, k={k}) reconstructs R_n only to {err:.2e}")
    a.setflags(write=False)
    p = DividedPoly(alpha, int(n), int(k), a, err)
    if p.min_relative < -NEGATIVE_REL:
        raise ArithmeticError(
            f"negative expansion coefficient for alpha={alpha}, n={n}, k={k}: "
            f"min a_s / max |a_s| = {p.min_relative:.3e}")
    return p


def translate_interval(alpha: float, theta: float, f: Callable, rho, *, nodes: int | None = None,
                       tol: float = 1e-13):
    """tau^theta f(rho) by Gauss-Jacobi quadrature in u = cos phi.

    f must be vectorized. With nodes=None the rule is doubled until stable.
    """
    alpha = as_order(alpha).alpha
    rho = np.asarray(rho, dtype=float)
    r = np.atleast_1d(rho)
    centre = theta * r
    spread = math.sqrt(max(1.0 - theta * theta, 0.0)) * np.sqrt(np.maximum(1.0 - r * r, 0.0))

    def rule(n):
        if alpha == -0.5:
            u, w = np.array([-1.0, 1.0]), np.array([0.5, 0.5])
        else:
            u, w = special.roots_jacobi(n, alpha - 0.5, alpha - 0.5)
            w = w / w.sum()
        pts = centre[:, None] + spread[:, None] * u[None, :]
        return np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape) @ w

    if alpha == -0.5 or nodes is not None:
        out = rule(nodes or 2)
    else:
        n = 32
        out = rule(n)
        for _ in range(6):
            n *= 2
            cur = rule(n)
            done = np.max(np.abs(cur - out)) <= tol * max(1.0, float(np.max(np.abs(cur))))
            out = cur
            if done:
                break
    return out.reshape(rho.shape) if rho.ndim else float(out[0])


def interval_gram(p: DividedPoly, thetas: Sequence[float], *, method: str = "product") -> np.ndarray:
    """(tau^{theta_i} p(theta_j)) from the product formula or by direct quadrature."""
    th = np.asarray(thetas, dtype=float)
    if np.any(np.abs(th) > 1.0):
        raise ValueError("theta values must lie in [-1, 1]")
    if method == "product":
        B = p.basis(th)
        return (B.T * p.coefficients) @ B
    if method == "quadrature":
        nodes = p.degree // 2 + 2
        G = np.array([translate_interval(p.alpha, t, p, th, nodes=nodes) for t in th])
        return 0.5 * (G + G.T)
    raise ValueError(f"unknown method {method!r}")


def gram_psd_interval(alpha: float, n: int, k: int, thetas: Sequence[float]) -> float:
    """Smallest eigenvalue of (tau^{theta_i} p_{n-k}(theta_j))."""
    G = interval_gram(divided_poly(alpha, n, k), thetas)
    return float(np.linalg.eigvalsh(G)[0])


def g_k(alpha: float, k: int) -> RadialProfile:
    """g_k(y) = j_alpha(y) / ((q_1^2 - y^2) ... (q_k^2 - y^2))."""
    from .extremal import BesselQuotient

    alpha = as_order(alpha).alpha
    if k == 0:
        return RadialProfile.bessel(alpha, 1.0)
    q = zeros(alpha, k).zeros
    quot = BesselQuotient(alpha, q)
    norm = float(np.prod(q**2))
    return RadialProfile(lambda y: quot(np.asarray(y, dtype=float)) / norm,
                         decay_exponent=alpha + 0.5 + 2 * k, period=2.0 * math.pi, name=f"g_{k}")


def _check_degree(n: int):
    if n > MAX_DEGREE:
        raise ValueError(f"limit checks are capped at n <= {MAX_DEGREE}")


def mehler_heine_check(alpha: float, k: int, n: int, y_grid) -> float:
    """sup_y |(2n^2)^-k p_{n-k}(1 - y^2/(2n^2)) - g_k(y)| over the grid."""
    _check_degree(n)
    y = np.asarray(y_grid, dtype=float)
    if np.any(y > n):
        raise ValueError("y_grid must satisfy y <= n")
    p = divided_poly(alpha, n, k)
    lhs = p(1.0 - y**2 / (2.0 * n * n)) / (2.0 * n * n) ** k
    return float(np.max(np.abs(lhs - g_k(alpha, k)(y))))


def zero_scaling_check(alpha: float, n: int, k: int) -> np.ndarray:
    """n^2 |1 - r_{i,n} - q_i^2/(2n^2)| for i <= k; tends to 0 as n grows."""
    _check_degree(n)
    r = jacobi_zeros(alpha, n)[::-1][:k]
    q = zeros(alpha, k).zeros
    return n * n * np.abs(1.0 - r - q**2 / (2.0 * n * n))


@dataclass(frozen=True)
class GramLimit:
    interval: np.ndarray
    half_line: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.interval - self.half_line)))


def gram_limit_check(alpha: float, k: int, n: int, points: Sequence[float]) -> GramLimit:
    """Interval Gram at theta_i = sqrt(1 - (x_i/n)^2), scaled by (2n^2)^-k, against (T^{x_i} g_k(x_j))."""
    _check_degree(n)
    x = np.asarray(points, dtype=float)
    if np.any(x < 0) or np.any(x > n):
        raise ValueError("points must satisfy 0 <= x_i <= n")
    thetas = np.sqrt(1.0 - (x / n) ** 2)
    interval = interval_gram(divided_poly(alpha, n, k), thetas) / (2.0 * n * n) ** k
    half_line = gram_matrix(Measure(alpha), g_k(alpha, k), x)
    return GramLimit(interval, half_line)


@dataclass(frozen=True)
class TailCertificate:
    """Partial sums S_M = sum_{s+l<=M} (L^2/4)^(s+l) / (Gamma(s+l+2) Gamma(s+l+alpha+2))."""

    alpha: float
    L: float
    partial_sums: np.ndarray
    envelope: float

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.partial_sums) >= 0))

    @property
    def within_envelope(self) -> bool:
        return bool(np.all(self.partial_sums <= self.envelope * (1 + 1e-14)))

    @property
    def remainder_bound(self) -> float:
        """Bound on the dropped part of the series after the last partial sum."""
        return self.envelope - float(self.partial_sums[-1])


def tail_certificate(alpha: float, L: float, terms: int = 60) -> TailCertificate:
    """Dominating double series for the Mehler-Heine limit, with its exponential envelope.

    Grouping by m = s + l gives (m+1) equal terms; since Gamma(m+alpha+2) >= 1
    for m >= 1, the sum is at most 1/Gamma(alpha+2) + e^(L^2/4) - 1.
    """
    alpha = as_order(alpha).alpha
    m = np.arange(terms)
    z = L * L / 4.0
    with np.errstate(divide="ignore"):
        logz = math.log(z) if z > 0 else -math.inf
    logt = m * logz - special.gammaln(m + 2.0) - special.gammaln(m + alpha + 2.0)
    logt[0] = -special.gammaln(2.0) - special.gammaln(alpha + 2.0)
    terms_m = (m + 1) * np.exp(logt)
    envelope = math.exp(z) - 1.0 + 1.0 / math.gamma(alpha + 2.0)
    return TailCertificate(alpha, float(L), np.cumsum(terms_m), envelope)
