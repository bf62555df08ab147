import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from scipy.integrate import simpson
from scipy.special import exp1

import src.constants as constants
from src.errors import ComputationRefused
from src.laplace import (G, closed_form_check, delay_ode_residual, delay_residual_grid, e1_continued_fraction,
                         e1_series, e1_switchover_gap, exp_integral_E1, invariant_ratio, laplace_estimate,
                         laplace_numeric, transform_ode_residual)
from src.limit_fn import f2


####################################################################################################
#  EXPONENTIAL INTEGRAL
####################################################################################################

def thirty_term_series(t):
    total = sum((-1) ** (k + 1) * t ** k / (k * math.factorial(k)) for k in range(1, 31))
    return total - constants.EULER_GAMMA - math.log(t)


def test_e1_at_one():
    assert exp_integral_E1(1.0) == pytest.approx(0.21938393439552, abs=1e-11)
    assert exp_integral_E1(1.0) == pytest.approx(thirty_term_series(1.0), abs=1e-11)


@pytest.mark.parametrize('t', [0.01, 0.1, 0.5, 1.0, 1.5, 3.0, 10.0, 40.0])
def test_e1_against_scipy(t):
    assert exp_integral_E1(t) == pytest.approx(exp1(t), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize('t', [1, 2, 5, 10])
def test_e1_sandwich(t):
    assert math.exp(-t) / (t + 1) < exp_integral_E1(t) < math.exp(-t) / t


def test_e1_methods_agree():
    assert e1_switchover_gap() < 1e-10
    assert abs(e1_series(0.5) - e1_continued_fraction(0.5)) < 1e-10


@given(st.floats(min_value=0.01, max_value=30.0), st.floats(min_value=1e-3, max_value=5.0))
def test_e1_decreasing_and_positive(t, dt):
    assert exp_integral_E1(t + dt) < exp_integral_E1(t)
    assert exp_integral_E1(t + dt) > 0


@pytest.mark.parametrize('t', [0.0, -1.0])
def test_e1_domain(t):
    with pytest.raises(ComputationRefused):
        exp_integral_E1(t)


####################################################################################################
#  G AND THE DELAY EQUATION
####################################################################################################

@pytest.mark.parametrize('x,expected', [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.5, 0.5), (2.0, 1.0)])
def test_G_examples(piecewise, x, expected):
    assert G(piecewise, x) == pytest.approx(expected, abs=1e-9)


def test_G_refusals(piecewise):
    with pytest.raises(ComputationRefused):
        G(piecewise, -0.1)
    with pytest.raises(ComputationRefused, match='r=25'):
        G(piecewise, 25.5)


def test_delay_residual_exact_on_first_interval(piecewise):
    assert abs(delay_ode_residual(piecewise, 1.5, 1e-5)) < 1e-6


def test_delay_residual_second_interval(piecewise):
    # On (2, 3), G(x) = f2(1/x) = 2x - 3 - (x-1) log(x-1) and G'(x) = 1 - log(x-1)
    x = 2.5
    assert G(piecewise, x) == pytest.approx(f2(1 / x), abs=1e-9)
    assert f2(1 / x) == pytest.approx(2 * x - 3 - (x - 1) * math.log(x - 1), abs=1e-12)
    analytic = f2(1 / x) - (x - 1) * (1 - math.log(x - 1)) - (x - 2)
    assert abs(analytic) < 1e-12
    assert abs(delay_ode_residual(piecewise, x, 1e-5)) < 1e-5


def test_delay_residual_third_interval(piecewise):
    assert abs(delay_ode_residual(piecewise, 3.5, 1e-5)) < 1e-4


def test_delay_residual_grid(piecewise):
    rows = delay_residual_grid(piecewise)
    assert [row['x'] for row in rows] == list(constants.DELAY_GRID)
    assert len(rows) == 15
    assert all(abs(row['residual']) < constants.DELAY_TOLERANCE for row in rows)


@pytest.mark.parametrize('x,h', [(1.0, 1e-5), (0.5, 1e-5), (2.00001, 1e-5), (2.5, 0.0)])
def test_delay_residual_refusals(piecewise, x, h):
    with pytest.raises(ComputationRefused):
        delay_ode_residual(piecewise, x, h)


####################################################################################################
#  LAPLACE TRANSFORM
####################################################################################################

@pytest.mark.slow
def test_laplace_against_simpson(piecewise):
    estimate = laplace_estimate(piecewise, 2.0, 12.0)
    assert estimate.tail_bound < 2e-10

    # Nodes land on every integer, where G may have kinks
    xs = np.linspace(1.0, 12.0, 220_001)
    ys = np.exp(-2.0 * xs) * np.array([G(piecewise, x) for x in xs])
    oracle = simpson(ys, x=xs) + estimate.tail_estimate
    assert estimate.value == pytest.approx(oracle, rel=1e-7)


def test_laplace_large_t(piecewise):
    t = 8.0
    assert 0.8 < laplace_numeric(piecewise, t) * t ** 2 * math.exp(t) < 1.05
    first_interval = math.exp(-t) / t ** 2 - math.exp(-2 * t) * (1 / t + 1 / t ** 2)
    assert laplace_numeric(piecewise, t) > first_interval


def test_laplace_small_t(piecewise):
    value = laplace_numeric(piecewise, 0.5, 20.0)
    assert math.isfinite(value) and value > 0


@pytest.mark.parametrize('t,x_max', [(0.0, 15.0), (2.0, 3.0), (0.4, 15.0), (2.0, 5.0), (1.0, 25.0)])
def test_laplace_refusals(piecewise, t, x_max):
    with pytest.raises(ComputationRefused):
        laplace_estimate(piecewise, t, x_max)


def test_closed_form_constancy(piecewise):
    check = closed_form_check(piecewise, constants.DEFAULT_T_LIST, 15.0)
    assert [row.t for row in check.rows] == list(constants.DEFAULT_T_LIST)
    assert all(row.g_hat > 0 for row in check.rows)
    assert check.max_rel_spread < 0.01
    summary = check.summary()
    assert list(summary)[:4] == ['empirical_K', 'max_rel_spread', 'x_max', 'r_max']
    assert summary['r_max'] == 20
    assert summary['implied_g_limit'] == pytest.approx(summary['empirical_K'] * math.exp(constants.EULER_GAMMA))


def test_closed_form_single_t(piecewise):
    check = closed_form_check(piecewise, [2.0])
    assert check.max_rel_spread == 0.0
    assert check.rows[0].invariant_ratio == pytest.approx(invariant_ratio(2.0, check.rows[0].g_hat))


def test_closed_form_refuses_empty_grid(piecewise):
    with pytest.raises(ComputationRefused):
        closed_form_check(piecewise, [])


@pytest.mark.parametrize('t', [1.0, 2.0, 3.0])
def test_truncation_consistency(piecewise, t):
    near = invariant_ratio(t, laplace_numeric(piecewise, t, 15.0))
    far = invariant_ratio(t, laplace_numeric(piecewise, t, 20.0))
    assert far == pytest.approx(near, rel=1e-3)


@pytest.mark.parametrize('t', [1.0, 2.0])
def test_transform_ode_residual(piecewise, t):
    residual = transform_ode_residual(piecewise, t, h=5e-4)
    assert abs(residual) < 1e-5 * laplace_numeric(piecewise, t)
