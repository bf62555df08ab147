"""
Convergence experiments: Lehmer's b(n) ~ e^-gamma n and
e^gamma b(n, floor(x n)) -> F(x).
"""

import math
import logging
from fractions import Fraction
from dataclasses import dataclass, field, asdict
from typing import Iterable, Union

import src.constants as constants
from src.errors import ComputationRefused
from src.exact_stats import ExactTriangle, FloatTriangle, scale_by_e_gamma
from src.limit_fn import PiecewiseLimit, eval_F, interval_index


logger = logging.getLogger(__name__)
console = logging.getLogger('console')

Real = Union[float, Fraction]


####################################################################################################
#  REPORTS
####################################################################################################

@dataclass(frozen=True)
class LehmerRow:
    n: int
    b_n: float
    ratio: float


@dataclass
class LehmerReport:
    """
    e^gamma b(n) / n for a list of n.
    """

    rows: list[LehmerRow] = field(default_factory=list)

    def as_dicts(self) -> list[dict]:
        return [asdict(row) for row in self.rows]


@dataclass(frozen=True)
class ConvergenceRow:
    x: float
    n: int
    k: int
    scaled: float
    limit: float
    abs_error: float


@dataclass
class ConvergenceReport:
    """
    Rows of (x, n, k, e^gamma b(n,k), F(x), error), x outer and n inner,
    plus a warning for every skipped row.
    """

    rows: list[ConvergenceRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def errors_for(self, x: Real) -> list[float]:
        """The abs_error column for one x, in n order."""
        return [row.abs_error for row in self.rows if row.x == float(x)]

    def as_dicts(self) -> list[dict]:
        return [asdict(row) for row in self.rows]


####################################################################################################
#  OPERATIONS
####################################################################################################

def floor_scaled(x: Real, n: int) -> int:
    """
    floor(x * n). Exact for rationals; floats get a small upward nudge so
    products that should be integers are not floored one short.
    """
    if isinstance(x, (Fraction, int)):
        return math.floor(Fraction(x) * n)
    return math.floor(x * n + constants.FLOOR_NUDGE)


def lehmer_report(triangle: FloatTriangle, n_list: Iterable[int]) -> LehmerReport:
    """
    One row (n, b(n), e^gamma b(n)/n) per n.
    """
    n_list = list(n_list)
    if len(n_list) == 0:
        logger.error('lehmer_report needs at least one n')
        raise ComputationRefused('The n list is empty.')

    report = LehmerReport()
    for n in n_list:
        b_n = triangle.total(n)
        report.rows.append(LehmerRow(n=n, b_n=b_n, ratio=scale_by_e_gamma(b_n) / n))
    return report


def convergence_report(triangle: FloatTriangle,
                       pw: PiecewiseLimit,
                       x_list: Iterable[Real],
                       n_list: Iterable[int]) -> ConvergenceReport:
    """
    Compare e^gamma b(n, floor(x n)) with F(x) over the cross product of
    x_list and n_list. Rows with floor(x n) = 0 are skipped with a warning.
    """
    x_list = list(x_list)
    n_list = list(n_list)
    if len(x_list) == 0 or len(n_list) == 0:
        logger.error('convergence_report needs non-empty x and n lists')
        raise ComputationRefused('The x list and the n list must be non-empty.')

    for x in x_list:
        r = interval_index(x)
        if r > pw.r_max:
            logger.error(f'x={x} needs interval {r}, deeper than r_max={pw.r_max}')
            raise ComputationRefused(f'x={x} needs interval {r} but r_max is {pw.r_max}.')
    for n in n_list:
        if not 1 <= n <= triangle.n_max:
            logger.error(f'n={n} is outside the float triangle (n_max={triangle.n_max})')
            raise ComputationRefused(f'n={n} is outside 1..{triangle.n_max}.')

    report = ConvergenceReport()
    for x in x_list:
        limit = eval_F(pw, x)
        for n in n_list:
            k = floor_scaled(x, n)
            if k < 1:
                message = f'Skipping x={float(x)!r}, n={n}: floor(x n) = 0'
                logger.warning(message)
                report.warnings.append(message)
                continue
            scaled = scale_by_e_gamma(triangle.entry(n, k))
            report.rows.append(ConvergenceRow(
                x=float(x), n=n, k=k, scaled=scaled, limit=limit, abs_error=abs(scaled - limit)))
    return report


def exact_cross_check(exact: ExactTriangle, flt: FloatTriangle, n_list: Iterable[int] = None) -> float:
    """
    Largest relative deviation of the float rows from the exact rows for
    the listed n (constants.EXACT_CHECK_N_LIST by default).
    """
    n_list = constants.EXACT_CHECK_N_LIST if n_list is None else n_list
    worst = 0.0
    for n in n_list:
        approx = flt.row(n)
        for k, value in enumerate(exact.row(n), start=1):
            worst = max(worst, abs(float(approx[k - 1]) - float(value)) / float(value))
    return worst


####################################################################################################
#  TREND CHECKS
####################################################################################################

def convergence_trend_failures(report: ConvergenceReport, x_list: Iterable[Real]) -> list[str]:
    """
    For each x the error must be weakly decreasing in n and the last
    error must be under half the first. Returns the violations.
    """
    failures = []
    for x in x_list:
        errors = report.errors_for(x)
        if len(errors) < 2:
            failures.append(f'x={float(x)}: fewer than two rows')
            continue
        for prev, curr in zip(errors, errors[1:]):
            if curr > prev:
                failures.append(f'x={float(x)}: error rose from {prev:.3e} to {curr:.3e}')
                break
        if not errors[-1] < errors[0] / 2:
            failures.append(f'x={float(x)}: error {errors[-1]:.3e} is not below half of {errors[0]:.3e}')
    return failures


def lehmer_trend_failures(report: LehmerReport) -> list[str]:
    """
    The distance |ratio - 1| must be strictly decreasing in n and the last
    ratio must end closer to 1 than the first. For large n the ratio climbs
    towards 1 from below. Returns the violations.
    """
    failures = []
    ratios = [row.ratio for row in report.rows]
    for row_prev, row_curr in zip(report.rows, report.rows[1:]):
        if not abs(row_curr.ratio - 1) < abs(row_prev.ratio - 1):
            failures.append(f'|ratio - 1| did not shrink from n={row_prev.n} to n={row_curr.n}')
            break
    if len(ratios) >= 2 and not abs(ratios[-1] - 1) < abs(ratios[0] - 1):
        failures.append('last ratio is not closer to 1 than the first')
    return failures
