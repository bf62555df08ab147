"""
Quadrature and ODE stepping used by the limit function and the Laplace check.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import src.constants as constants
from src.errors import ComputationRefused


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerance and recursion cap for adaptive Simpson quadrature.
    """

    abs_tol: float = constants.QUAD_ABS_TOL
    max_depth: int = constants.QUAD_MAX_DEPTH

    def __post_init__(self):
        if not self.abs_tol > 0:
            logger.error(f'Quadrature tolerance must be positive: {self.abs_tol}')
            raise ValueError(f'abs_tol must be positive, got {self.abs_tol}.')
        if self.max_depth < 1:
            logger.error(f'Quadrature depth must be at least 1: {self.max_depth}')
            raise ValueError(f'max_depth must be at least 1, got {self.max_depth}.')


def integrate(f: Callable[[float], float], a: float, b: float, quad: QuadratureConfig = None) -> float:
    """
    Integrate f over [a, b] by adaptive Simpson's rule.

    Each subdivision halves the absolute tolerance. The accepted panel gets
    the Richardson correction (left + right - whole) / 15.

    Raises:
        ComputationRefused: if a > b or a panel is still unresolved at max_depth.
    """
    quad = quad or QuadratureConfig()

    if a > b:
        logger.error(f'Integration bounds are reversed: [{a}, {b}]')
        raise ComputationRefused(f'Integration needs a <= b, got [{a}, {b}].')
    if a == b:
        return 0.0

    m = (a + b) / 2
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _adaptive_simpson(f, a, b, fa, fm, fb, whole, quad.abs_tol, quad.max_depth, (a, b))


def _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth, span) -> float:
    m = (a + b) / 2
    lm = (a + m) / 2
    rm = (m + b) / 2
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    delta = left + right - whole

    if abs(delta) <= 15 * tol:
        return left + right + delta / 15

    if depth <= 1:
        logger.error(f'Adaptive Simpson hit the depth cap on [{a}, {b}] inside [{span[0]}, {span[1]}]')
        raise ComputationRefused(
            f'Quadrature did not converge on the interval [{span[0]}, {span[1]}] '
            f'(stuck near [{a}, {b}] at the depth cap).')

    return (_adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, span)
            + _adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, span))


def rk4(rhs: Callable[[float, float], float], x0: float, u0: float, x1: float, steps: int) -> float:
    """
    Classical fourth-order Runge-Kutta for u' = rhs(x, u) from x0 to x1
    in a fixed number of steps. x1 may lie on either side of x0.
    """
    if steps < 1:
        raise ValueError(f'steps must be at least 1, got {steps}.')
    if x1 == x0:
        return u0

    h = (x1 - x0) / steps
    x, u = x0, u0
    for i in range(steps):
        k1 = rhs(x, u)
        k2 = rhs(x + h / 2, u + h / 2 * k1)
        k3 = rhs(x + h / 2, u + h / 2 * k2)
        k4 = rhs(x + h, u + h * k3)
        u += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        # Recompute from x0 so the last step lands on x1
        x = x0 + (i + 1) * h
    return u


def uniform_grid(lo: float, hi: float, count: int) -> list[float]:
    """
    count evenly spaced points in (lo, hi], the last one at hi.
    """
    return [lo + (hi - lo) * i / count for i in range(1, count + 1)]
