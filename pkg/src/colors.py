BLACK = (0, 0, 0)
WHITE = (255, 255, 255)
GRAY = (144, 144, 144)

RED = (200, 30, 30)
GREEN = (30, 140, 60)
BLUE = (30, 70, 200)

BROWN = (138, 94, 56)
PINK = (227, 28, 121)
LIGHT_BROWN = (217, 183, 165)

PLOT_BG = WHITE
AXES = BLACK
GUIDE = LIGHT_BROWN
LABEL_TEXT = BLACK
SERIES = (BLUE, RED, GREEN, BROWN, PINK, GRAY)


def to_hex(color: tuple[int, int, int]) -> str:
    """Convert an RGB triple to an SVG hex color."""
    return '#{:02x}{:02x}{:02x}'.format(*color)
