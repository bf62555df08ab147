"""
Module for rendering line plots: hand-written SVG text, or a pygame raster.
"""

import os
import math
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

os.environ.setdefault('PYGAME_HIDE_SUPPORT_PROMPT', '1')
os.environ.setdefault('SDL_VIDEODRIVER', 'dummy')
import pygame  # noqa: E402

from src.coord import Coord  # noqa: E402
from src.errors import ConfigError  # noqa: E402
import src.colors as colors  # noqa: E402
import src.constants as constants  # noqa: E402
import src.utils.render_utils as utils  # noqa: E402


logger = logging.getLogger(__name__)
console = logging.getLogger('console')

RASTER_SUFFIXES = ('.png', '.bmp', '.tga')


@dataclass
class Series:
    name: str
    xs: list[float]
    ys: list[float]


@dataclass
class Plot:
    """
    What to draw: labelled line series plus vertical guide lines.
    """

    title: str
    x_label: str
    y_label: str
    series: list[Series] = field(default_factory=list)
    guides: list[tuple[float, str]] = field(default_factory=list)
    """Vertical guides as (x, label)."""
    log_x: bool = False
    log_y: bool = False


class Renderer:
    """
    Lays out a Plot on a canvas and draws it.
    """

    def __init__(self, plot: Plot, width: int = constants.PLOT_WIDTH, height: int = constants.PLOT_HEIGHT) -> None:
        if len(plot.series) == 0:
            logger.error(f'Nothing to plot for {plot.title!r}')
            raise ValueError('A plot needs at least one series.')

        self.__plot = plot
        self.__width = width
        self.__height = height

        self.plot_rect: pygame.Rect = utils.calc_plot_rect(width, height)
        """The plotting area inside the canvas."""

        all_x = [x for s in plot.series for x in s.xs] + [g[0] for g in plot.guides]
        all_y = [y for s in plot.series for y in s.ys]
        self.x_range = utils.calc_range(all_x, plot.log_x)
        """Shown x range, in log10 units on a log axis."""
        self.y_range = utils.calc_range(all_y, plot.log_y)
        """Shown y range, in log10 units on a log axis."""

    @property
    def plot(self) -> Plot:
        """The plot being rendered."""
        return self.__plot

    @property
    def size(self) -> tuple[int, int]:
        """Canvas width and height."""
        return self.__width, self.__height

    ################################################################################################
    # COORDINATES
    ################################################################################################

    def to_screen(self, x: float, y: float) -> Optional[Coord]:
        """
        Convert a data point to canvas pixels. None if the point cannot be
        shown (non-positive on a log axis).
        """
        if self.__plot.log_x:
            if x <= 0:
                return None
            x = math.log10(x)
        if self.__plot.log_y:
            if y <= 0:
                return None
            y = math.log10(y)

        rect = self.plot_rect
        sx = utils.data_to_screen(x, *self.x_range, rect.x, rect.width)
        sy = utils.data_to_screen(y, *self.y_range, rect.y, rect.height, flip=True)
        return Coord((sx, sy))

    def __polyline(self, series: Series) -> list[Coord]:
        points = (self.to_screen(x, y) for x, y in zip(series.xs, series.ys))
        return [p for p in points if p is not None]

    def __guide_x(self, x: float) -> Optional[float]:
        if self.__plot.log_x:
            if x <= 0:
                return None
            x = math.log10(x)
        return utils.data_to_screen(x, *self.x_range, self.plot_rect.x, self.plot_rect.width)

    ################################################################################################
    # SVG
    ################################################################################################

    def render_svg(self) -> str:
        """
        The plot as an SVG document. Deterministic for a given plot.
        """
        plot = self.__plot
        rect = self.plot_rect
        w, h = self.size
        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
            f'<rect x="0" y="0" width="{w}" height="{h}" fill="{colors.to_hex(colors.PLOT_BG)}"/>',
            f'<text x="{w / 2:.2f}" y="{constants.PLOT_TOP_MARGIN / 2:.2f}" text-anchor="middle" '
            f'font-family="monospace" font-size="16">{_escape(plot.title)}</text>',
        ]

        for x, label in plot.guides:
            gx = self.__guide_x(x)
            if gx is None:
                continue
            lines.append(f'<line x1="{gx:.2f}" y1="{rect.top}" x2="{gx:.2f}" y2="{rect.bottom}" '
                         f'stroke="{colors.to_hex(colors.GUIDE)}" stroke-dasharray="4,3"/>')
            lines.append(f'<text x="{gx:.2f}" y="{rect.top - 4}" text-anchor="middle" '
                         f'font-family="monospace" font-size="10">{_escape(label)}</text>')

        lines.extend(self.__svg_axes())

        for idx, series in enumerate(plot.series):
            color = colors.to_hex(colors.SERIES[idx % len(colors.SERIES)])
            points = ' '.join(p.svg() for p in self.__polyline(series))
            lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
            lines.append(f'<text x="{rect.right - 4}" y="{rect.top + 14 * (idx + 1)}" text-anchor="end" '
                         f'font-family="monospace" font-size="12" fill="{color}">{_escape(series.name)}</text>')

        lines.append('</svg>')
        return '\n'.join(lines) + '\n'

    def __svg_axes(self) -> list[str]:
        plot = self.__plot
        rect = self.plot_rect
        axes = colors.to_hex(colors.AXES)
        lines = [f'<rect x="{rect.x}" y="{rect.y}" width="{rect.width}" height="{rect.height}" '
                 f'fill="none" stroke="{axes}"/>']

        for tick in utils.calc_ticks(*self.x_range):
            sx = utils.data_to_screen(tick, *self.x_range, rect.x, rect.width)
            lines.append(f'<line x1="{sx:.2f}" y1="{rect.bottom}" x2="{sx:.2f}" y2="{rect.bottom + 5}" stroke="{axes}"/>')
            lines.append(f'<text x="{sx:.2f}" y="{rect.bottom + 18}" text-anchor="middle" font-family="monospace" '
                         f'font-size="11">{utils.format_tick(tick, plot.log_x)}</text>')

        for tick in utils.calc_ticks(*self.y_range):
            sy = utils.data_to_screen(tick, *self.y_range, rect.y, rect.height, flip=True)
            lines.append(f'<line x1="{rect.x - 5}" y1="{sy:.2f}" x2="{rect.x}" y2="{sy:.2f}" stroke="{axes}"/>')
            lines.append(f'<text x="{rect.x - 8}" y="{sy + 4:.2f}" text-anchor="end" font-family="monospace" '
                         f'font-size="11">{utils.format_tick(tick, plot.log_y)}</text>')

        lines.append(f'<text x="{rect.centerx}" y="{self.__height - 12}" text-anchor="middle" '
                     f'font-family="monospace" font-size="13">{_escape(plot.x_label)}</text>')
        lines.append(f'<text x="16" y="{rect.centery}" text-anchor="middle" font-family="monospace" font-size="13" '
                     f'transform="rotate(-90 16 {rect.centery})">{_escape(plot.y_label)}</text>')
        return lines

    ################################################################################################
    # RASTER
    ################################################################################################

    def render_surface(self) -> pygame.Surface:
        """
        The plot drawn onto an off-screen pygame surface.
        """
        pygame.font.init()
        font = pygame.font.Font(None, 18)
        small_font = pygame.font.Font(None, 14)

        plot = self.__plot
        rect = self.plot_rect
        surface = pygame.Surface(self.size)
        surface.fill(colors.PLOT_BG)

        for x, label in plot.guides:
            gx = self.__guide_x(x)
            if gx is None:
                continue
            pygame.draw.line(surface, colors.GUIDE, (round(gx), rect.top), (round(gx), rect.bottom))
            self.__blit_text(surface, small_font, label, Coord((gx, rect.top - 8)))

        pygame.draw.rect(surface, colors.AXES, rect, 1)

        for tick in utils.calc_ticks(*self.x_range):
            sx = round(utils.data_to_screen(tick, *self.x_range, rect.x, rect.width))
            pygame.draw.line(surface, colors.AXES, (sx, rect.bottom), (sx, rect.bottom + 5))
            self.__blit_text(surface, small_font, utils.format_tick(tick, plot.log_x), Coord((sx, rect.bottom + 14)))

        for tick in utils.calc_ticks(*self.y_range):
            sy = round(utils.data_to_screen(tick, *self.y_range, rect.y, rect.height, flip=True))
            pygame.draw.line(surface, colors.AXES, (rect.x - 5, sy), (rect.x, sy))
            self.__blit_text(surface, small_font, utils.format_tick(tick, plot.log_y), Coord((rect.x - 30, sy)))

        for idx, series in enumerate(plot.series):
            color = colors.SERIES[idx % len(colors.SERIES)]
            points = [p.rounded() for p in self.__polyline(series)]
            if len(points) >= 2:
                pygame.draw.lines(surface, color, False, points, 2)
            label = font.render(series.name, True, color)
            surface.blit(label, label.get_rect(topright=(rect.right - 4, rect.top + 4 + 16 * idx)))

        self.__blit_text(surface, font, plot.title, Coord((self.__width / 2, constants.PLOT_TOP_MARGIN / 2)))
        self.__blit_text(surface, font, plot.x_label, Coord((rect.centerx, self.__height - 14)))
        y_label = pygame.transform.rotate(font.render(plot.y_label, True, colors.LABEL_TEXT), 90)
        surface.blit(y_label, y_label.get_rect(center=(16, rect.centery)))
        return surface

    @staticmethod
    def __blit_text(surface: pygame.Surface, font: pygame.font.Font, text: str, center: Coord) -> None:
        rendered = font.render(text, True, colors.LABEL_TEXT)
        surface.blit(rendered, rendered.get_rect(center=center.rounded()))

    ################################################################################################
    # OUTPUT
    ################################################################################################

    def save(self, path: str) -> None:
        """
        Write the plot to path; the suffix picks SVG or a pygame raster format.
        """
        suffix = Path(path).suffix.lower()
        if suffix == '.svg':
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(self.render_svg())
        elif suffix in RASTER_SUFFIXES:
            pygame.image.save(self.render_surface(), path)
        else:
            logger.error(f'Unsupported plot format: {path}')
            raise ConfigError(f'Plot path must end in .svg or one of {", ".join(RASTER_SUFFIXES)}: {path}')
        console.info(f'Wrote plot to {path}')


def _escape(text: str) -> str:
    return text.replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;')
