import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logan_lab.bessel import (Order, b_const, first_zero_growth_check, j_norm, j_norm_derivative, psi_m,
                              series_coefficients, zeros)
from oracles import BESSEL_ZEROS, J_NORM_VALUES

orders = st.floats(min_value=-0.5, max_value=6.0)
points = st.floats(min_value=0.0, max_value=60.0)


@pytest.mark.parametrize("alpha", sorted(BESSEL_ZEROS))
def test_zeros_match_mpmath(alpha):
    got = zeros(alpha, 4).zeros
    np.testing.assert_allclose(got, BESSEL_ZEROS[alpha], rtol=2e-15)


def test_zeros_half_order_are_odd_multiples_of_half_pi():
    np.testing.assert_allclose(zeros(-0.5, 6).zeros, (np.arange(1, 7) - 0.5) * np.pi, rtol=0, atol=1e-15)


def test_zero_table_indexing():
    tab = zeros(1.0, 3)
    assert tab.q(1) == tab.zeros[0] and tab.count == 3 and list(tab) == tab.zeros.tolist()
    with pytest.raises(IndexError):
        tab.q(4)


@pytest.mark.parametrize("alpha,x,expected", J_NORM_VALUES)
def test_j_norm_values(alpha, x, expected):
    assert j_norm(alpha, x) == pytest.approx(expected, rel=1e-12, abs=1e-16)


@given(points)
def test_half_orders_are_elementary(x):
    assert j_norm(-0.5, x) == pytest.approx(math.cos(x), abs=1e-14)
    expected = math.sin(x) / x if x else 1.0
    assert j_norm(0.5, x) == pytest.approx(expected, abs=1e-14)


@given(orders)
def test_value_at_origin_is_one(alpha):
    assert j_norm(alpha, 0.0) == 1.0


@given(orders, points)
def test_derivative_recurrence(alpha, x):
    # j_alpha'(x) = -x j_{alpha+1}(x) / (2 (alpha + 1))
    lhs = j_norm_derivative(alpha, x, 1)
    rhs = -x * j_norm(alpha + 1, x) / (2 * (alpha + 1))
    assert lhs == pytest.approx(rhs, abs=1e-13)


@given(orders, st.floats(min_value=0.0, max_value=5.0))
def test_series_agrees_with_function(alpha, x):
    s = series_coefficients(alpha, 40)
    assert np.polynomial.polynomial.polyval(x * x, s) == pytest.approx(j_norm(alpha, x), abs=1e-13)


@given(orders)
def test_zeros_interlace(alpha):
    a = zeros(alpha, 5).zeros
    b = zeros(alpha + 1, 5).zeros
    assert np.all(a < b) and np.all(b[:-1] < a[1:])


@given(orders, points)
def test_envelope_bound(alpha, x):
    assert abs(j_norm(alpha, x)) <= 1.0 + 1e-15


def test_b_const():
    assert b_const(0.0) == 1.0
    assert b_const(-0.5) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)


def test_order_validation_message():
    with pytest.raises(ValueError, match=r"alpha >= -1/2"):
        Order(-1.0)
    with pytest.raises(ValueError):
        Order(float("nan"))


@given(orders, st.integers(min_value=1, max_value=5), points)
def test_taylor_remainder_is_nonnegative(alpha, m, x):
    assert psi_m(alpha, m, x) >= -1e-12


def test_first_zero_growth():
    rows = first_zero_growth_check([10.0, 100.0, 1000.0])
    ratios = [r["ratio"] for r in rows]
    assert abs(ratios[-1] - 1.8557571) < abs(ratios[0] - 1.8557571)
    with pytest.raises(ValueError):
        first_zero_growth_check([2.0, 1.0])
