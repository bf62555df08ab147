"""
Some useful utility functions for the plot renderer.
"""

import os
import math

os.environ.setdefault('PYGAME_HIDE_SUPPORT_PROMPT', '1')
import pygame  # noqa: E402

import src.constants as constants


def calc_plot_rect(width: int, height: int) -> pygame.Rect:
    """
    Calculate the rect of the plotting area inside a canvas, leaving the
    margins for the axis labels and the title.

    Parameters:
        width: The canvas width.
        height: The canvas height.

    Returns:
        The plotting area, relative to the canvas.
    """
    left = constants.PLOT_LEFT_MARGIN
    top = constants.PLOT_TOP_MARGIN
    plot_w = width - constants.PLOT_LEFT_MARGIN - constants.PLOT_RIGHT_MARGIN
    plot_h = height - constants.PLOT_TOP_MARGIN - constants.PLOT_BOTTOM_MARGIN
    return pygame.Rect(left, top, max(1, plot_w), max(1, plot_h))


def calc_range(values: list[float], log: bool = False) -> tuple[float, float]:
    """
    The data range to show for the given values, padded by 5% on each side.
    With log scaling the range is in log10 units.

    Parameters:
        values: The data values. Non-positive values are ignored on a log axis.
        log: Whether the axis is logarithmic.

    Returns:
        The lower and upper bound of the axis.
    """
    if log:
        values = [math.log10(v) for v in values if v > 0]
    values = [v for v in values if math.isfinite(v)]
    if len(values) == 0:
        return 0.0, 1.0

    lo, hi = min(values), max(values)
    if lo == hi:
        # A flat series still needs a non-empty range
        lo, hi = lo - 0.5, hi + 0.5
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def calc_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    """
    Evenly spaced tick values on a 1-2-5 step inside [lo, hi].
    """
    span = hi - lo
    raw_step = span / max(1, count)
    magnitude = 10 ** math.floor(math.log10(raw_step))
    step = magnitude
    for multiple in (1, 2, 5, 10):
        if multiple * magnitude >= raw_step:
            step = multiple * magnitude
            break

    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-9:
        ticks.append(round(value, 12))
        value += step
    return ticks


def data_to_screen(value: float, lo: float, hi: float, start: float, length: float, flip: bool = False) -> float:
    """
    Map a data value in [lo, hi] onto a pixel span starting at start.
    With flip the span runs backwards, as the y axis does on screen.
    """
    frac = (value - lo) / (hi - lo)
    if flip:
        frac = 1 - frac
    return start + frac * length


def format_tick(value: float, log: bool = False) -> str:
    """Label text for a tick, 10^value on a log axis."""
    if log:
        return f'1e{value:g}'
    return f'{value:g}'
