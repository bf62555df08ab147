"""
The scaling limit F(x) = lim e^gamma * b(n, floor(x n)) on (0, 1].

F is assembled from smooth pieces F_r on (1/(r+1), 1/r]. F_1(x) = (1-x)/x and
for r >= 2

    F_r(x) = q - q * ( int_{x/(1-x)}^{1/(r-1)} F_{r-1}(t) dt + sum_{s=1}^{r-2} I_s ),

with q = (1-x)/x and I_s the integral of F_s over its own interval. The pieces
can also be reached through the ODE

    d/dx ( x/(1-x) F_r(x) ) = F_{r-1}( x/(1-x) ) / (1-x)^2,

seeded at x = 1/r by continuity with F_{r-1}.
"""

import math
import logging
from fractions import Fraction
from typing import Iterator, Union

import numpy as np
from numpy.polynomial import Chebyshev

import src.constants as constants
from src.errors import ComputationRefused
from src.utils.numeric_utils import QuadratureConfig, integrate, rk4


logger = logging.getLogger(__name__)
console = logging.getLogger('console')

Real = Union[float, Fraction]


####################################################################################################
#  CLOSED FORMS
####################################################################################################

def f1(x: float) -> float:
    """
    The first piece (1-x)/x on (1/2, 1], plus its boundary value 1 at x = 1/2.
    """
    if not 0.5 <= x <= 1:
        logger.error(f'f1 called outside [1/2, 1]: x={x}')
        raise ComputationRefused(f'f1 is defined on (1/2, 1], got x={x}.')
    return (1 - x) / x


def f2(x: float) -> float:
    """
    The second piece (2-3x)/x - ((1-x)/x) log((1-x)/x) on (1/3, 1/2].
    """
    if not 1 / 3 < x <= 0.5:
        logger.error(f'f2 called outside (1/3, 1/2]: x={x}')
        raise ComputationRefused(f'f2 is defined on (1/3, 1/2], got x={x}.')
    return _f2_formula(x)


def _f2_formula(x: float) -> float:
    q = (1 - x) / x
    return (2 - 3 * x) / x - q * math.log(q)


def closed_form(x: float):
    """
    The closed form of F at x when one is known (r <= 2), otherwise None.
    """
    r = interval_index(x)
    if r == 1:
        return f1(x)
    if r == 2:
        return f2(x)
    return None


def interval_index(x: Real) -> int:
    """
    Returns the r with 1/(r+1) < x <= 1/r. Exact at the breakpoints when
    x is given as a Fraction.
    """
    if not 0 < x <= 1:
        logger.error(f'interval_index called outside (0, 1]: x={x}')
        raise ComputationRefused(f'x must lie in (0, 1], got x={x}.')

    def reciprocal(r: int):
        return Fraction(1, r) if isinstance(x, Fraction) else 1 / r

    inverse = 1 / x
    if not isinstance(x, Fraction) and not math.isfinite(inverse):
        logger.error(f'interval_index: 1/x overflows for x={x}')
        raise ComputationRefused(f'x={x} is too small: 1/x is not finite.')
    r = max(1, math.floor(inverse))

    # 1/x can round across an integer
    while r > 1 and x > reciprocal(r):
        r -= 1
    while x <= reciprocal(r + 1):
        r += 1
    return r


####################################################################################################
#  PIECEWISE LIMIT
####################################################################################################

class PiecewiseLimit:
    """
    F on (1/(r_max+1), 1], with the interval integrals I_s and a Chebyshev
    interpolant of every piece F_r on its closed interval [1/(r+1), 1/r].
    """

    def __init__(self,
                 r_max: int,
                 interval_integrals: tuple[float, ...],
                 pieces: tuple[Chebyshev, ...],
                 quad: QuadratureConfig):

        if r_max < 1:
            logger.error(f'Invalid r_max: {r_max}')
            raise ValueError(f'r_max must be at least 1, got {r_max}.')
        if len(interval_integrals) != r_max - 1:
            raise ValueError(f'Expected {r_max - 1} interval integrals, got {len(interval_integrals)}.')
        if len(pieces) != r_max - 1:
            raise ValueError(f'Expected {r_max - 1} interpolated pieces, got {len(pieces)}.')

        self.__r_max = r_max
        self.__interval_integrals = tuple(interval_integrals)
        self.__pieces = tuple(pieces)
        """Interpolants of F_2, ..., F_{r_max}. F_1 is exact."""
        self.__quad = quad

    @property
    def r_max(self) -> int:
        """The deepest supported interval index."""
        return self.__r_max

    @property
    def interval_integrals(self) -> tuple[float, ...]:
        """I_1, ..., I_{r_max - 1}."""
        return self.__interval_integrals

    @property
    def quad(self) -> QuadratureConfig:
        """The quadrature settings the pieces were built with."""
        return self.__quad

    @property
    def breakpoints(self) -> list[float]:
        """The breakpoints 1, 1/2, ..., 1/(r_max + 1)."""
        return [1 / r for r in range(1, self.__r_max + 2)]

    @property
    def lower_bound(self) -> float:
        """F is available on (lower_bound, 1]."""
        return 1 / (self.__r_max + 1)

    def integral_sum(self, upto: int) -> float:
        """Returns I_1 + ... + I_upto."""
        return math.fsum(self.__interval_integrals[:upto])

    def piece_value(self, r: int, x: float) -> float:
        """
        Evaluate the r-th piece at x on its closed interval [1/(r+1), 1/r].
        """
        if r == 1:
            return (1 - x) / x
        if not 2 <= r <= self.__r_max:
            raise ComputationRefused(f'Piece {r} is not available (r_max={self.__r_max}).')
        return float(self.__pieces[r - 2](x))

    def __call__(self, x: Real) -> float:
        """
        F(x) from the cached pieces; zero for x > 1.
        """
        if x > 1:
            return 0.0
        r = interval_index(x)
        if r > self.__r_max:
            logger.error(f'x={x} lies in interval {r}, deeper than r_max={self.__r_max}')
            raise ComputationRefused(f'x={x} needs interval {r} but r_max is {self.__r_max}.')
        return self.piece_value(r, float(x))


def _recursion(r: int, x: float, piece_below, integral_sum: float, quad: QuadratureConfig) -> float:
    """
    The integral recursion for F_r at x, given the piece F_{r-1} and
    I_1 + ... + I_{r-2}. One adaptive quadrature.
    """
    q = (1 - x) / x
    if r == 1:
        return q
    hi = 1 / (r - 1)
    lo = min(x / (1 - x), hi)
    inner = integrate(piece_below, lo, hi, quad)
    return q - q * (inner + integral_sum)


def build_piecewise(r_max: int = None, quad: QuadratureConfig = None, degree: int = None) -> PiecewiseLimit:
    """
    Build F piece by piece for r = 2..r_max.

    For each r, I_{r-1} is integrated from the piece below, then F_r is
    sampled at Chebyshev points of [1/(r+1), 1/r] through the recursion
    and interpolated.

    Parameters:
        r_max: Deepest interval. Defaults to constants.R_MAX.
        quad: Quadrature settings.
        degree: Interpolant degree. Defaults to constants.PIECE_DEGREE.
    """
    r_max = constants.R_MAX if r_max is None else r_max
    quad = quad or QuadratureConfig()
    degree = constants.PIECE_DEGREE if degree is None else degree

    if r_max < 1:
        logger.error(f'Invalid r_max: {r_max}')
        raise ComputationRefused(f'r_max must be at least 1, got {r_max}.')

    logger.info(f'Building piecewise limit up to r={r_max} (abs_tol={quad.abs_tol})...')
    integrals: list[float] = []
    pieces: list[Chebyshev] = []

    def piece(s: int):
        if s == 1:
            return lambda t: (1 - t) / t
        cheb = pieces[s - 2]
        return lambda t: float(cheb(t))

    for r in range(2, r_max + 1):
        below = piece(r - 1)
        try:
            integral = integrate(below, 1 / r, 1 / (r - 1), quad)
        except ComputationRefused as err:
            raise ComputationRefused(f'Interval integral I_{r - 1} over [1/{r}, 1/{r - 1}] failed: {err}') from err
        integrals.append(integral)

        total_before = math.fsum(integrals[:-1])

        def sample(xs: np.ndarray, r=r, below=below, total_before=total_before) -> np.ndarray:
            return np.array([_recursion(r, float(x), below, total_before, quad) for x in xs])

        try:
            pieces.append(Chebyshev.interpolate(sample, degree, domain=[1 / (r + 1), 1 / r]))
        except ComputationRefused as err:
            raise ComputationRefused(f'Piece F_{r} on [1/{r + 1}, 1/{r}] failed: {err}') from err

        logger.debug(f'I_{r - 1} = {integral!r}')

    logger.info(f'Built piecewise limit with {len(integrals)} interval integrals.')
    return PiecewiseLimit(r_max, tuple(integrals), tuple(pieces), quad)


####################################################################################################
#  EVALUATION
####################################################################################################

def eval_F(pw: PiecewiseLimit, x: Real) -> float:
    """
    F(x) by the integral recursion: the integral over [x/(1-x), 1/(r-1)]
    is done adaptively, the rest comes from the cached I_s. Zero for x > 1.
    """
    if x > 1:
        return 0.0
    r = interval_index(x)
    if r > pw.r_max:
        logger.error(f'x={x} lies in interval {r}, deeper than r_max={pw.r_max}')
        raise ComputationRefused(f'x={x} needs interval {r} but r_max is {pw.r_max}.')

    x = float(x)
    if r == 1:
        return f1(x)
    return _recursion(r, x, lambda t: pw.piece_value(r - 1, t), pw.integral_sum(r - 2), pw.quad)


def eval_F_ode(pw: PiecewiseLimit, x: Real, steps: int = None) -> float:
    """
    F(x) by integrating the ODE for u = x/(1-x) F_r(x) with RK4 from the
    right endpoint 1/r down to x.
    """
    steps = constants.ODE_STEPS if steps is None else steps

    if x > 1:
        return 0.0
    r = interval_index(x)
    if r > pw.r_max:
        logger.error(f'x={x} lies in interval {r}, deeper than r_max={pw.r_max}')
        raise ComputationRefused(f'x={x} needs interval {r} but r_max is {pw.r_max}.')

    x = float(x)
    if r == 1:
        return f1(x)

    x0 = 1 / r
    # Continuity at the breakpoint: u(1/r) = F_{r-1}(1/r) / (r-1)
    u0 = pw.piece_value(r - 1, x0) / (r - 1)

    def rhs(s: float, _u: float) -> float:
        return pw.piece_value(r - 1, s / (1 - s)) / (1 - s) ** 2

    u = rk4(rhs, x0, u0, x, steps)
    return u * (1 - x) / x


def limit_rows(pw: PiecewiseLimit, xs: list[Real], method: str = 'quadrature') -> Iterator[dict]:
    """
    Rows of the evaluation grid export: x, r, F by quadrature, F by ODE,
    and the closed form where one exists. Columns for methods not asked
    for are None.
    """
    if method not in ('quadrature', 'ode', 'both'):
        raise ValueError(f'Unknown method {method!r}.')

    for x in xs:
        r = interval_index(x)
        yield {
            'x': float(x),
            'r': r,
            'F_quadrature': eval_F(pw, x) if method in ('quadrature', 'both') else None,
            'F_ode': eval_F_ode(pw, x) if method in ('ode', 'both') else None,
            'closed_form_or_empty': closed_form(float(x)) if r <= 2 else None,
        }
