import pytest
import pygame

from src.coord import Coord
from src.errors import ConfigError
from src.renderer import Plot, Renderer, Series
import src.colors as colors
import src.utils.render_utils as utils


def make_plot(**kwargs) -> Plot:
    series = [Series('F', [0.25, 0.5, 0.75, 1.0], [1.5, 1.0, 1 / 3, 0.0])]
    return Plot(title='F(x)', x_label='x', y_label='F(x)', series=series, **kwargs)


def test_coord():
    c = Coord((1, 2))
    assert c == (1.0, 2.0)
    assert (c.x, c.y) == (1.0, 2.0)
    assert Coord((1.4, 2.6)).rounded() == (1, 3)
    assert Coord((1, 2.5)).svg() == '1.00,2.50'


def test_to_hex():
    assert colors.to_hex(colors.WHITE) == '#ffffff'
    assert colors.to_hex((30, 70, 200)) == '#1e46c8'


def test_calc_range():
    assert utils.calc_range([0.0, 1.0]) == pytest.approx((-0.05, 1.05))
    assert utils.calc_range([2.0, 2.0]) == pytest.approx((1.45, 2.55))
    assert utils.calc_range([10.0, 1000.0, -1.0], log=True) == pytest.approx((0.9, 3.1))
    assert utils.calc_range([]) == (0.0, 1.0)


def test_calc_ticks():
    assert utils.calc_ticks(0.0, 1.0) == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    assert utils.calc_ticks(-0.05, 1.05, 5) == [0.0, 0.5, 1.0]


def test_data_to_screen():
    assert utils.data_to_screen(0.5, 0.0, 1.0, 100, 200) == 200
    assert utils.data_to_screen(0.0, 0.0, 1.0, 100, 200, flip=True) == 300


def test_calc_plot_rect():
    rect = utils.calc_plot_rect(960, 600)
    assert isinstance(rect, pygame.Rect)
    assert rect.right < 960 and rect.bottom < 600


def test_renderer_requires_series():
    with pytest.raises(ValueError):
        Renderer(Plot(title='empty', x_label='x', y_label='y'))


def test_to_screen_corners():
    renderer = Renderer(make_plot())
    rect = renderer.plot_rect
    low = renderer.to_screen(renderer.x_range[0], renderer.y_range[0])
    high = renderer.to_screen(renderer.x_range[1], renderer.y_range[1])
    assert low == pytest.approx((rect.x, rect.y + rect.height))
    assert high == pytest.approx((rect.x + rect.width, rect.y))


def test_log_axes_drop_non_positive_points():
    renderer = Renderer(make_plot(log_x=True, log_y=True))
    assert renderer.to_screen(1.0, 0.0) is None
    assert renderer.to_screen(0.5, 1.0) is not None


def test_svg_is_deterministic():
    plot = make_plot(guides=[(0.5, '1/2'), (1 / 3, '1/3')])
    first = Renderer(plot).render_svg()
    assert first == Renderer(plot).render_svg()
    assert first.startswith('<svg')
    assert first.rstrip().endswith('</svg>')
    assert first.count('<polyline') == 1
    assert 'stroke-dasharray' in first
    assert '1/3' in first


def test_svg_escapes_labels():
    svg = Renderer(Plot(title='a<b & c', x_label='x', y_label='y', series=[Series('s', [0, 1], [0, 1])])).render_svg()
    assert 'a&lt;b &amp; c' in svg


def test_save_svg(tmp_path):
    path = tmp_path / 'plot.svg'
    Renderer(make_plot()).save(str(path))
    assert path.read_text() == Renderer(make_plot()).render_svg()


def test_save_png(tmp_path):
    path = tmp_path / 'plot.png'
    Renderer(make_plot(guides=[(0.5, '1/2')]), 320, 200).save(str(path))
    image = pygame.image.load(str(path))
    assert image.get_size() == (320, 200)


def test_save_rejects_unknown_suffix(tmp_path):
    with pytest.raises(ConfigError):
        Renderer(make_plot()).save(str(tmp_path / 'plot.gif'))
