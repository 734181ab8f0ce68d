import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from logan_lab.bessel import zeros
from logan_lab.jacobi_limit import (JacobiPoly, divided_poly, g_k, gram_limit_check, gram_psd_interval,
                                    interval_gram, jacobi_eval, jacobi_zeros, mehler_heine_check,
                                    tail_certificate, translate_interval, zero_scaling_check)

LIMIT_ALPHAS = [0.0, 1.0, 2.5]


def test_chebyshev_case_is_cosine():
    theta = np.linspace(0.0, math.pi, 50)
    np.testing.assert_allclose(jacobi_eval(-0.5, 4, np.cos(theta)), np.cos(4 * theta), atol=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7, 2.5])
def test_normalized_at_one_and_matches_scipy(alpha):
    x = np.linspace(-1.0, 1.0, 21)
    for n in (0, 1, 5, 17):
        assert jacobi_eval(alpha, n, 1.0) == pytest.approx(1.0, abs=1e-14)
        ref = special.eval_jacobi(n, alpha, alpha, x) / special.eval_jacobi(n, alpha, alpha, 1.0)
        np.testing.assert_allclose(jacobi_eval(alpha, n, x), ref, atol=1e-12)


@pytest.mark.parametrize("alpha,n", [(0.0, 7), (1.0, 12), (2.5, 30)])
def test_zeros(alpha, n):
    r = jacobi_zeros(alpha, n)
    ref, _ = special.roots_jacobi(n, alpha, alpha)
    np.testing.assert_allclose(r, np.sort(ref), atol=1e-13)
    np.testing.assert_array_equal(r, -r[::-1])
    P = JacobiPoly(alpha, n)
    assert P.r(1) == r[-1]
    with pytest.raises(IndexError):
        P.r(n + 1)


def test_derivative_matches_finite_difference():
    P = JacobiPoly(0.7, 9)
    x, h = 0.31, 1e-6
    assert P.derivative(x) == pytest.approx((P(x + h) - P(x - h)) / (2 * h), rel=1e-7)


def test_divided_poly_edge_cases():
    alpha, n = 0.7, 9
    p0 = divided_poly(alpha, n, 0)
    np.testing.assert_allclose(p0.coefficients, np.eye(n + 1)[n], atol=1e-12)
    pn = divided_poly(alpha, n, n)
    assert pn.degree == 0
    r = jacobi_zeros(alpha, n)
    # R_n(1) = 1 so the constant is 1 / prod(1 - r_i)
    assert pn.coefficients[0] == pytest.approx(1.0 / np.prod(1.0 - r), rel=1e-10)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
@pytest.mark.parametrize("n,k", [(12, 3), (25, 4), (60, 2)])
def test_expansion_coefficients_nonnegative(alpha, n, k):
    p = divided_poly(alpha, n, k)
    assert p.min_relative >= -1e-10
    assert p.reconstruction_error < 1e-10
    x = np.linspace(-1.0, 0.99, 37)
    top = jacobi_zeros(alpha, n)[n - k:]
    np.testing.assert_allclose(p(x) * np.prod(x[:, None] - top, axis=1), jacobi_eval(alpha, n, x),
                               atol=1e-11 * max(1.0, np.max(np.abs(p(x)))))


@given(st.sampled_from([0.0, 0.7, 1.0]), st.floats(-1, 1), st.floats(-1, 1), st.integers(0, 8))
def test_product_formula(alpha, theta, rho, s):
    lhs = translate_interval(alpha, theta, lambda x: jacobi_eval(alpha, s, x), rho)
    rhs = jacobi_eval(alpha, s, theta) * jacobi_eval(alpha, s, rho)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_translation_at_identity_and_cosine_addition():
    f = lambda x: x**3 - 0.2 * x
    rho = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(translate_interval(1.0, 1.0, f, rho), f(rho), atol=1e-14)
    a, b = 0.4, 1.1
    got = translate_interval(-0.5, math.cos(a), lambda x: np.cos(5 * np.arccos(np.clip(x, -1, 1))), math.cos(b))
    assert got == pytest.approx(math.cos(5 * a) * math.cos(5 * b), abs=1e-13)


@pytest.mark.parametrize("alpha", LIMIT_ALPHAS)
def test_interval_gram_psd_and_methods_agree(alpha):
    thetas = np.linspace(-0.9, 0.95, 6)
    for k in (0, 2):
        p = divided_poly(alpha, 10, k)
        G = interval_gram(p, thetas)
        np.testing.assert_allclose(interval_gram(p, thetas, method="quadrature"), G, atol=1e-11 * np.abs(G).max())
        assert gram_psd_interval(alpha, 10, k, thetas) >= -1e-12 * np.abs(G).max()
    with pytest.raises(ValueError):
        interval_gram(p, [1.5])


@pytest.mark.parametrize("alpha", LIMIT_ALPHAS)
@pytest.mark.parametrize("k", [0, 1, 2])
def test_mehler_heine_converges(alpha, k):
    y = np.linspace(0.0, 8.0, 161)
    errs = [mehler_heine_check(alpha, k, n, y) for n in (50, 100, 200)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 2e-2


def test_mehler_heine_small_order_example():
    assert mehler_heine_check(0.0, 0, 200, np.linspace(0.0, 8.0, 161)) <= 5e-3


def test_g_k_values():
    alpha = 1.0
    q = zeros(alpha, 2).zeros
    g2 = g_k(alpha, 2)
    assert g2(0.0) == pytest.approx(1.0 / np.prod(q**2), rel=1e-13)
    for y in (0.37, q[0], 5.0):
        expected = g_k(alpha, 0)(y) / ((q[0] ** 2 - y * y) * (q[1] ** 2 - y * y)) if y != q[0] else None
        if expected is not None:
            assert g2(y) == pytest.approx(expected, rel=1e-12)
    # removable singularity at q_1 is continuous
    assert g2(q[0]) == pytest.approx(g2(q[0] * (1 + 1e-7)), rel=1e-5)


@pytest.mark.parametrize("alpha", LIMIT_ALPHAS)
def test_zero_scaling(alpha):
    a = zero_scaling_check(alpha, 100, 3)
    b = zero_scaling_check(alpha, 400, 3)
    assert np.all(b < a)


@pytest.mark.parametrize("alpha", LIMIT_ALPHAS)
def test_gram_limit(alpha):
    pts = [0.0, 1.3, 2.9, 4.4, 6.0]
    e = [gram_limit_check(alpha, 2, n, pts).max_error for n in (50, 100, 200)]
    assert e[0] > e[1] > e[2] and e[2] <= 1e-2


@pytest.mark.parametrize("alpha", [-0.5, -0.2, 0.0, 2.5])
def test_tail_certificate(alpha):
    cert = tail_certificate(alpha, 8.0)
    assert cert.monotone and cert.within_envelope and cert.remainder_bound >= 0
    assert cert.envelope == pytest.approx(math.exp(16.0) - 1 + 1 / math.gamma(alpha + 2), rel=1e-12)


def test_degree_cap():
    with pytest.raises(ValueError, match="400"):
        mehler_heine_check(0.0, 0, 401, [1.0])
    with pytest.raises(ValueError):
        divided_poly(0.0, 3, 4)
