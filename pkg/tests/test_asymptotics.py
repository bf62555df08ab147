import math
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

import src.constants as constants
from src.asymptotics import (ConvergenceReport, ConvergenceRow, LehmerReport, LehmerRow, convergence_report,
                             convergence_trend_failures, exact_cross_check, floor_scaled, lehmer_report,
                             lehmer_trend_failures)
from src.config import parse_ratio
from src.errors import ComputationRefused
from src.exact_stats import build_float_triangle


E_GAMMA = math.exp(constants.EULER_GAMMA)
DEFAULT_X = [parse_ratio(x) for x in constants.DEFAULT_X_LIST]


@pytest.mark.parametrize('x,n,k', [
    (Fraction(3, 4), 4000, 3000), (Fraction(3, 10), 1000, 300), (0.3, 1000, 300),
    (0.15, 500, 75), (0.45, 2000, 900), (1.0, 7, 7), (Fraction(1, 3), 10, 3), (0.01, 50, 0),
])
def test_floor_scaled(x, n, k):
    assert floor_scaled(x, n) == k


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1)), st.integers(min_value=1, max_value=5000))
def test_floor_scaled_exact_for_rationals(x, n):
    k = floor_scaled(x, n)
    assert k <= x * n < k + 1


def test_lehmer_small_values():
    report = lehmer_report(build_float_triangle(4), [1, 4])
    assert report.rows[0].ratio == pytest.approx(E_GAMMA, rel=1e-15)
    assert report.rows[1].b_n == pytest.approx(7 / 3, rel=1e-15)
    assert report.rows[1].ratio == pytest.approx(1.0390, abs=1e-4)
    assert report.as_dicts()[1]['n'] == 4


def test_lehmer_trend(float_triangle_4000):
    report = lehmer_report(float_triangle_4000, constants.LEHMER_N_LIST)
    assert lehmer_trend_failures(report) == []
    ratios = {row.n: row.ratio for row in report.rows}
    assert abs(ratios[4000] - 1) < abs(ratios[500] - 1)
    # Approaches 1 from below
    assert ratios[100] == pytest.approx(0.9656, abs=1e-3)
    assert ratios[4000] == pytest.approx(0.9982, abs=1e-3)
    assert all(ratios[a] < ratios[b] < 1 for a, b in zip(sorted(ratios), sorted(ratios)[1:]))


def test_lehmer_trend_accepts_rise_towards_one():
    rising = LehmerReport(rows=[LehmerRow(n=100, b_n=0.0, ratio=0.96), LehmerRow(n=200, b_n=0.0, ratio=0.98),
                                LehmerRow(n=300, b_n=0.0, ratio=0.99)])
    assert lehmer_trend_failures(rising) == []

    overshoot = LehmerReport(rows=[LehmerRow(n=100, b_n=0.0, ratio=0.96), LehmerRow(n=200, b_n=0.0, ratio=1.05)])
    failures = lehmer_trend_failures(overshoot)
    assert len(failures) == 2
    assert 'did not shrink' in failures[0]


def test_lehmer_refuses_empty_list():
    with pytest.raises(ComputationRefused):
        lehmer_report(build_float_triangle(4), [])


@pytest.mark.slow
def test_convergence_trend(float_triangle_4000, piecewise):
    report = convergence_report(float_triangle_4000, piecewise, DEFAULT_X, constants.DEFAULT_N_LIST)
    assert len(report.rows) == len(DEFAULT_X) * len(constants.DEFAULT_N_LIST)
    assert report.warnings == []
    assert convergence_trend_failures(report, DEFAULT_X) == []
    errors = report.errors_for(Fraction(3, 4))
    assert errors[-1] < errors[0]


def test_convergence_at_one(float_triangle_4000, piecewise):
    report = convergence_report(float_triangle_4000, piecewise, [1], [100, 4000])
    for row in report.rows:
        assert row.k == row.n
        assert row.limit == 0.0
        assert row.abs_error == pytest.approx(E_GAMMA / row.n, rel=1e-14)


def test_convergence_row_order(float_triangle_4000, piecewise):
    report = convergence_report(float_triangle_4000, piecewise, [Fraction(3, 4), Fraction(3, 5)], [500, 1000])
    assert [(row.x, row.n) for row in report.rows] == [(0.75, 500), (0.75, 1000), (0.6, 500), (0.6, 1000)]
    assert list(report.as_dicts()[0]) == ['x', 'n', 'k', 'scaled', 'limit', 'abs_error']


def test_collapsed_sum_at_three_quarters(float_triangle_4000, piecewise):
    row = convergence_report(float_triangle_4000, piecewise, [Fraction(3, 4)], [4000]).rows[0]
    assert row.k == 3000
    assert row.scaled == pytest.approx(E_GAMMA * float_triangle_4000.total(1000) / 3000, rel=1e-14)


def test_convergence_skips_empty_floor(piecewise):
    report = convergence_report(build_float_triangle(100), piecewise, [Fraction(1, 20)], [10, 100])
    assert [row.n for row in report.rows] == [100]
    assert len(report.warnings) == 1


def test_convergence_refusals(piecewise):
    flt = build_float_triangle(100)
    with pytest.raises(ComputationRefused):
        convergence_report(flt, piecewise, [], [50])
    with pytest.raises(ComputationRefused):
        convergence_report(flt, piecewise, [0.5], [200])
    with pytest.raises(ComputationRefused):
        convergence_report(flt, piecewise, [0.01], [100])


def test_exact_cross_check(float_triangle_4000, exact_triangle_300):
    assert exact_cross_check(exact_triangle_300, float_triangle_4000) < 1e-10


def test_trend_failures_are_reported():
    rows = [ConvergenceRow(x=0.5, n=n, k=n // 2, scaled=1.0, limit=1.0, abs_error=err)
            for n, err in ((500, 0.01), (1000, 0.02), (2000, 0.009))]
    failures = convergence_trend_failures(ConvergenceReport(rows=rows), [0.5])
    assert len(failures) == 2
    assert 'rose' in failures[0]

    lehmer = LehmerReport(rows=[LehmerRow(n=1, b_n=1.0, ratio=1.2), LehmerRow(n=2, b_n=2.6, ratio=1.3)])
    assert len(lehmer_trend_failures(lehmer)) == 2
