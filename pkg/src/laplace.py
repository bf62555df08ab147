"""
The delay equation and the Laplace transform of G(x) = F(1/x).

With F(x) = 0 for x > 1, G vanishes on [0, 1] and satisfies

    G(x) - (x - 1) G'(x) = G(x - 1),

whose transform obeys d/dt G^(t) = ((e^-t - t - 2) / t) G^(t), solved by

    G^(t) = K t^-2 exp(Ei(-t) - t),    Ei(-t) = -E1(t).

K is not determined analytically; it is measured as the mean of
t^2 exp(t - Ei(-t)) G^(t) over a grid of t.
"""

import math
import logging
from dataclasses import dataclass, field, asdict
from typing import Iterable

import src.constants as constants
from src.errors import ComputationRefused
from src.limit_fn import PiecewiseLimit, interval_index
from src.utils.numeric_utils import QuadratureConfig, integrate


logger = logging.getLogger(__name__)
console = logging.getLogger('console')


####################################################################################################
#  EXPONENTIAL INTEGRAL
####################################################################################################

def e1_series(t: float) -> float:
    """
    E1(t) = -gamma - ln t + sum_{k>=1} (-1)^(k+1) t^k / (k k!).
    """
    total = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= t / k
        contribution = term / k
        total += contribution if k % 2 == 1 else -contribution
        if contribution < 1e-17 * max(abs(total), 1e-300):
            break
        if k > constants.E1_MAX_ITERATIONS:
            raise ComputationRefused(f'E1 series did not converge at t={t}.')
    return total - constants.EULER_GAMMA - math.log(t)


def e1_continued_fraction(t: float) -> float:
    """
    E1(t) = e^-t / (t + 1 - 1/(t + 3 - 4/(t + 5 - ...))), by modified Lentz.
    """
    tiny = 1e-300
    b = t + 1
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, constants.E1_MAX_ITERATIONS + 1):
        a = -i * i
        b += 2
        d = 1 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1) < constants.E1_EPS:
            return h * math.exp(-t)

    logger.error(f'E1 continued fraction did not converge at t={t}')
    raise ComputationRefused(f'E1 continued fraction did not converge at t={t}.')


def exp_integral_E1(t: float) -> float:
    """
    E1(t) for t > 0: series up to the switchover, continued fraction above.
    """
    if not t > 0:
        logger.error(f'E1 requested at t={t}')
        raise ComputationRefused(f'E1 is only evaluated for t > 0, got t={t}.')
    if t <= constants.E1_SWITCHOVER:
        return e1_series(t)
    return e1_continued_fraction(t)


def e1_switchover_gap() -> float:
    """|series - continued fraction| at the switchover point."""
    t = constants.E1_SWITCHOVER
    return abs(e1_series(t) - e1_continued_fraction(t))


####################################################################################################
#  G AND THE DELAY EQUATION
####################################################################################################

def G(pw: PiecewiseLimit, x: float) -> float:
    """
    G(x) = F(1/x), zero on [0, 1].
    """
    if x < 0:
        logger.error(f'G requested at x={x}')
        raise ComputationRefused(f'G is defined for x >= 0, got x={x}.')
    if x <= 1:
        return 0.0
    r = interval_index(1 / x)
    if r > pw.r_max:
        logger.error(f'G({x}) needs interval {r}, deeper than r_max={pw.r_max}')
        raise ComputationRefused(f'G({x}) needs r={r} but r_max is {pw.r_max}.')
    return pw(1 / x)


def delay_ode_residual(pw: PiecewiseLimit, x: float, h: float = None) -> float:
    """
    G(x) - (x - 1) G'(x) - G(x - 1), with G' by central difference.

    The breakpoints of F map to the integers in the G variable, so x must
    stay more than 2h away from any integer.
    """
    h = constants.DELAY_STEP if h is None else h

    if not x > 1:
        raise ComputationRefused(f'The delay equation is checked for x > 1, got x={x}.')
    if not h > 0:
        raise ComputationRefused(f'The difference step must be positive, got h={h}.')
    if abs(x - round(x)) <= 2 * h:
        logger.error(f'x={x} is within 2h={2 * h} of the breakpoint image {round(x)}')
        raise ComputationRefused(f'x={x} is too close to the breakpoint image {round(x)} for h={h}.')

    derivative = (G(pw, x + h) - G(pw, x - h)) / (2 * h)
    return G(pw, x) - (x - 1) * derivative - G(pw, x - 1)


def delay_residual_grid(pw: PiecewiseLimit, xs: Iterable[float] = None, h: float = None) -> list[dict]:
    """
    Rows (x, G(x), residual) over a grid, constants.DELAY_GRID by default.
    """
    xs = constants.DELAY_GRID if xs is None else xs
    return [{'x': x, 'G': G(pw, x), 'residual': delay_ode_residual(pw, x, h)} for x in xs]


####################################################################################################
#  LAPLACE TRANSFORM
####################################################################################################

@dataclass(frozen=True)
class LaplaceEstimate:
    value: float
    tail_estimate: float
    tail_bound: float


def laplace_estimate(pw: PiecewiseLimit, t: float, x_max: float = None) -> LaplaceEstimate:
    """
    G^(t) = int_1^x_max e^-tx G(x) dx + G(x_max) e^(-t x_max) / t.

    The integral is split at every integer so each panel sees one smooth
    piece of G. The tail treats G as constant past x_max; its magnitude is
    reported as the tail bound.
    """
    x_max = constants.X_MAX if x_max is None else x_max

    if not t > 0:
        raise ComputationRefused(f'The transform is evaluated for t > 0, got t={t}.')
    if t * x_max < constants.MIN_TAIL_EXPONENT:
        logger.error(f't*x_max = {t * x_max} is below {constants.MIN_TAIL_EXPONENT}')
        raise ComputationRefused(
            f't*x_max = {t * x_max:g} < {constants.MIN_TAIL_EXPONENT:g}: the tail is not negligible.')
    if x_max < constants.MIN_X_MAX:
        logger.error(f'x_max={x_max} is below {constants.MIN_X_MAX}')
        raise ComputationRefused(
            f'x_max={x_max:g} < {constants.MIN_X_MAX:g}: G has not settled enough for the constant tail.')
    needed = interval_index(1 / x_max)
    if needed > pw.r_max:
        logger.error(f'x_max={x_max} needs interval {needed}, deeper than r_max={pw.r_max}')
        raise ComputationRefused(f'x_max={x_max} needs r={needed} but r_max is {pw.r_max}.')

    quad = QuadratureConfig(abs_tol=pw.quad.abs_tol * math.exp(-t), max_depth=pw.quad.max_depth)

    def integrand(x: float) -> float:
        return math.exp(-t * x) * G(pw, x)

    edges = list(range(1, math.ceil(x_max))) + [x_max]
    panels = [integrate(integrand, lo, hi, quad) for lo, hi in zip(edges, edges[1:])]

    g_end = G(pw, x_max)
    tail = g_end * math.exp(-t * x_max) / t
    return LaplaceEstimate(value=math.fsum(panels) + tail, tail_estimate=tail, tail_bound=abs(tail))


def laplace_numeric(pw: PiecewiseLimit, t: float, x_max: float = None) -> float:
    """The numerical Laplace transform of G at t."""
    return laplace_estimate(pw, t, x_max).value


def invariant_ratio(t: float, g_hat: float) -> float:
    """t^2 exp(t - Ei(-t)) G^(t), constant in t if the closed form holds."""
    return t * t * math.exp(t + exp_integral_E1(t)) * g_hat


def transform_ode_residual(pw: PiecewiseLimit, t: float, x_max: float = None, h: float = 1e-3) -> float:
    """
    G^'(t) - ((e^-t - t - 2) / t) G^(t), with G^' by central difference.
    """
    derivative = (laplace_numeric(pw, t + h, x_max) - laplace_numeric(pw, t - h, x_max)) / (2 * h)
    return derivative - (math.exp(-t) - t - 2) / t * laplace_numeric(pw, t, x_max)


@dataclass(frozen=True)
class LaplaceRow:
    t: float
    g_hat: float
    invariant_ratio: float


@dataclass
class LaplaceCheck:
    """
    Invariant ratios over a grid of t and their spread.
    """

    rows: list[LaplaceRow] = field(default_factory=list)
    x_max: float = constants.X_MAX
    r_max: int = constants.R_MAX
    g_at_x_max: float = 0.0

    @property
    def empirical_K(self) -> float:
        """Mean invariant ratio."""
        return math.fsum(row.invariant_ratio for row in self.rows) / len(self.rows)

    @property
    def max_rel_spread(self) -> float:
        """Largest relative deviation of a ratio from the mean."""
        mean = self.empirical_K
        return max(abs(row.invariant_ratio - mean) / abs(mean) for row in self.rows)

    @property
    def implied_g_limit(self) -> float:
        """K e^gamma, the value G tends to at infinity under the closed form."""
        return self.empirical_K * math.exp(constants.EULER_GAMMA)

    def summary(self) -> dict:
        return {
            'empirical_K': self.empirical_K,
            'max_rel_spread': self.max_rel_spread,
            'x_max': self.x_max,
            'r_max': self.r_max,
            'g_at_x_max': self.g_at_x_max,
            'implied_g_limit': self.implied_g_limit,
        }

    def as_dicts(self) -> list[dict]:
        return [asdict(row) for row in self.rows]


def closed_form_check(pw: PiecewiseLimit, t_list: Iterable[float], x_max: float = None) -> LaplaceCheck:
    """
    Measure t^2 exp(t - Ei(-t)) G^(t) over t_list.
    """
    x_max = constants.X_MAX if x_max is None else x_max
    t_list = list(t_list)
    if len(t_list) == 0:
        raise ComputationRefused('The t list is empty.')

    check = LaplaceCheck(x_max=x_max, r_max=pw.r_max)
    for t in t_list:
        g_hat = laplace_numeric(pw, t, x_max)
        check.rows.append(LaplaceRow(t=t, g_hat=g_hat, invariant_ratio=invariant_ratio(t, g_hat)))
    check.g_at_x_max = G(pw, x_max)

    logger.info(f'Laplace check: K ~ {check.empirical_K!r}, spread {check.max_rel_spread:.3e}')
    return check
