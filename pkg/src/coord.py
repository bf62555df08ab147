class Coord(tuple):
    """
    A point in plot pixel space.
    """

    def __new__(cls, xy=(0.0, 0.0)):
        x, y = xy
        return super().__new__(cls, (float(x), float(y)))

    @property
    def x(self) -> float:
        return self[0]

    @property
    def y(self) -> float:
        return self[1]

    def rounded(self) -> tuple[int, int]:
        """Integer pixel position, for raster drawing."""
        return round(self.x), round(self.y)

    def svg(self) -> str:
        """The point as an SVG 'x,y' pair with fixed precision."""
        return f'{self.x:.2f},{self.y:.2f}'
