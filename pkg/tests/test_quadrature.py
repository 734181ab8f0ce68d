import math

import numpy as np
import pytest

from logan_lab.bessel import j_norm
from logan_lab.extremal import ExtremalFunction
from logan_lab.quadrature import (apply_gauss, apply_radau, bessel_square_moment, even_derivative_at_zero,
                                  gauss_rule, gauss_weight_oracle, radau_rule)
from oracles import ALPHAS, bessel_square_integral, shifted_square_integral


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gauss_on_squared_bessel(alpha):
    rule = gauss_rule(alpha)
    got = apply_gauss(rule, lambda t: j_norm(alpha + 1, t) ** 2, decay=2 * alpha + 3)
    assert got.value == pytest.approx(bessel_square_integral(alpha), rel=1e-10)
    assert np.all(rule.weights > 0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gauss_annihilates_extremal_function(alpha):
    # f_{alpha,1} vanishes at every node except q_1 ... where it vanishes too: the integral is 0
    ef = ExtremalFunction(alpha, 1)
    got = apply_gauss(gauss_rule(alpha), ef, decay=ef.decay_exponent)
    assert abs(got.value) < 1e-12


def test_gauss_type_scaling():
    alpha, tau = 0.7, 1.0
    rule = gauss_rule(alpha, tau)
    got = apply_gauss(rule, lambda t: j_norm(alpha + 1, t / 2) ** 2, decay=2 * alpha + 3)
    expected = (tau / 2) ** (2 * alpha + 2) * 2 ** (2 * alpha + 2) * bessel_square_integral(alpha)
    assert got.value == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_weight_oracle(k):
    rule = gauss_rule(1.0)
    assert gauss_weight_oracle(1.0, k) == pytest.approx(rule.weights[k - 1], rel=1e-10)
    assert rule.oracle_discrepancy < 1e-8


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("r", [1, 2, 3])
def test_radau_on_shifted_square(alpha, r):
    rule = radau_rule(alpha, 2.0, r)
    f = lambda t: t**2 * j_norm(alpha + 2, t) ** 2
    # t^2 j_{alpha+2}(t)^2 = t^2 - t^4 / (2(alpha+3)) + ...
    derivs = [0.0, 2.0, -12.0 / (alpha + 3)][:r]
    got = apply_radau(rule, f, derivatives=derivs, decay=2 * alpha + 3)
    assert got.value == pytest.approx(shifted_square_integral(alpha), rel=1e-9)
    assert np.all(rule.node_weights > 0) and rule.origin_weights[-1] > 0


def test_radau_estimates_derivatives_itself():
    alpha = 0.0
    rule = radau_rule(alpha, 2.0, 2)
    got = apply_radau(rule, lambda t: t**2 * j_norm(alpha + 2, t) ** 2, decay=3.0)
    assert got.value == pytest.approx(shifted_square_integral(alpha), rel=1e-7)


def test_radau_range():
    with pytest.raises(ValueError, match="1 <= r <= 3"):
        radau_rule(0.0, 2.0, 4)


def test_closed_form_moment():
    assert bessel_square_moment(1.0, 0.0) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ValueError):
        bessel_square_moment(0.0, 0.0)


def test_finite_difference_derivatives():
    assert even_derivative_at_zero(np.cos, 2) == pytest.approx(-1.0, abs=1e-9)
    assert even_derivative_at_zero(np.cos, 4) == pytest.approx(1.0, abs=1e-6)
    assert even_derivative_at_zero(np.cos, 0) == 1.0


def test_rule_validation():
    with pytest.raises(ValueError):
        gauss_rule(0.0, tau=-1.0)
    with pytest.raises(ValueError):
        gauss_rule(0.0, count=0)
    rule = gauss_rule(0.0, 2.0, 32)
    assert rule.tail_bound == pytest.approx(1.0 / rule.nodes[-1] * 1.0, rel=1e-15) and math.isfinite(rule.tail_bound)
