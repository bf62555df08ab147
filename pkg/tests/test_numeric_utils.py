import math

import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.errors import ComputationRefused
from src.utils.numeric_utils import QuadratureConfig, integrate, rk4, uniform_grid


@pytest.mark.parametrize('f,a,b,expected', [
    (lambda x: 1.0, 0.0, 1.0, 1.0),
    (lambda x: x ** 3, 0.0, 2.0, 4.0),
    (math.sin, 0.0, math.pi, 2.0),
    (lambda x: 1 / x, 1.0, math.e, 1.0),
    (math.exp, -1.0, 1.0, math.e - 1 / math.e),
])
def test_integrate(f, a, b, expected):
    assert integrate(f, a, b) == pytest.approx(expected, abs=1e-9)


def test_integrate_empty_interval():
    assert integrate(math.exp, 0.3, 0.3) == 0.0


def test_integrate_refuses_reversed_bounds():
    with pytest.raises(ComputationRefused):
        integrate(math.exp, 1.0, 0.0)


def test_integrate_refuses_at_depth_cap():
    with pytest.raises(ComputationRefused, match='interval'):
        integrate(lambda x: 1 / math.sqrt(x) if x > 0 else 1e300, 0.0, 1.0, QuadratureConfig(1e-12, 5))


@pytest.mark.parametrize('abs_tol,max_depth', [(0.0, 10), (-1e-8, 10), (1e-8, 0)])
def test_quadrature_config_validation(abs_tol, max_depth):
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol, max_depth)


def test_rk4_exponential():
    assert rk4(lambda x, u: u, 0.0, 1.0, 1.0, 200) == pytest.approx(math.e, rel=1e-9)


def test_rk4_backwards():
    # u' = 2x from x = 1 down to x = 0
    assert rk4(lambda x, u: 2 * x, 1.0, 1.0, 0.0, 10) == pytest.approx(0.0, abs=1e-12)


def test_rk4_zero_length():
    assert rk4(lambda x, u: 1.0, 0.5, 3.0, 0.5, 16) == 3.0


def test_rk4_refuses_no_steps():
    with pytest.raises(ValueError):
        rk4(lambda x, u: u, 0.0, 1.0, 1.0, 0)


@given(st.floats(min_value=-10, max_value=10), st.floats(min_value=0.1, max_value=10),
       st.integers(min_value=1, max_value=50))
def test_uniform_grid(lo, width, count):
    hi = lo + width
    grid = uniform_grid(lo, hi, count)
    assert len(grid) == count
    assert grid[-1] == pytest.approx(hi)
    assert all(lo < x <= hi + 1e-12 for x in grid)
    assert all(a < b for a, b in zip(grid, grid[1:]))
