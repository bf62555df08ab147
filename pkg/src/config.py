"""
Run configuration for the command-line front end.
"""

import logging
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional

import src.constants as constants
from src.errors import ConfigError


logger = logging.getLogger(__name__)

TRUE_WORDS = ('true', 'yes', 'on')
FALSE_WORDS = ('false', 'no', 'off', '')


def parse_ratio(text: str) -> Fraction:
    """
    Parse a decimal ('0.75') or a ratio ('3/4') exactly.
    """
    try:
        if '/' in text:
            num, den = text.split('/', 1)
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError(f'Not a decimal or p/q ratio: {text!r}') from err


def load_config_file(path: str) -> list[str]:
    """
    Read a flat key=value file and return the equivalent command-line
    flags. Keys mirror the long flags ('n_max' or 'n-max'); list values are
    separated by spaces or commas; booleans turn their flag on or off.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as err:
        logger.error(f'Cannot read config file {path}: {err}')
        raise ConfigError(f'Cannot read config file {path}: {err}') from err

    tokens: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip()
        if line == '':
            continue
        if '=' not in line:
            logger.error(f'{path}:{lineno}: expected key=value, got {raw.strip()!r}')
            raise ConfigError(f'{path}:{lineno}: expected key=value, got {raw.strip()!r}')

        key, value = (part.strip() for part in line.split('=', 1))
        flag = '--' + key.replace('_', '-')
        lowered = value.lower()
        if lowered in TRUE_WORDS:
            tokens.append(flag)
        elif lowered in FALSE_WORDS:
            continue
        else:
            tokens.append(flag)
            tokens.extend(v for v in value.replace(',', ' ').split() if v)
    return tokens


@dataclass
class RunConfig:
    """
    Parameters of one subcommand run. Fields a subcommand does not use keep
    their defaults.
    """

    command: str
    fmt: str = 'csv'
    out: Optional[str] = None
    plot: Optional[str] = None

    # table
    n_max: int = 30
    exact: bool = False
    compare: bool = False
    compensated: bool = False

    # limit
    x_list: list = field(default_factory=list)
    method: str = 'quadrature'
    r_max: int = constants.R_MAX
    abs_tol: float = constants.QUAD_ABS_TOL
    max_depth: int = constants.QUAD_MAX_DEPTH

    # converge
    n_list: list = field(default_factory=list)
    lehmer: bool = False
    check: bool = False

    # laplace
    t_list: list = field(default_factory=list)
    x_max: float = constants.X_MAX
    delay_check: bool = False
    h: float = constants.DELAY_STEP

    # selftest
    quick: bool = False
    perturb_gamma: float = 0.0

    def validate(self) -> 'RunConfig':
        """
        Raise ConfigError on the first invalid setting.
        """
        if self.fmt not in ('csv', 'json'):
            self.__fail(f'--format must be csv or json, got {self.fmt!r}')
        if not self.abs_tol > 0:
            self.__fail(f'--abs-tol must be positive, got {self.abs_tol}')
        if self.max_depth < 1:
            self.__fail(f'--max-depth must be at least 1, got {self.max_depth}')
        if self.r_max < 1:
            self.__fail(f'--r-max must be at least 1, got {self.r_max}')
        if not self.h > 0:
            self.__fail(f'--h must be positive, got {self.h}')

        if self.command == 'table':
            if not 1 <= self.n_max <= constants.FLOAT_CAP:
                self.__fail(f'--n-max must lie in 1..{constants.FLOAT_CAP} (memory grows quadratically), '
                            f'got {self.n_max}')

        if self.command in ('limit', 'converge'):
            for x in self.x_list:
                if not 0 < x <= 1:
                    self.__fail(f'x must lie in (0, 1], got {x}')

        if self.command == 'converge':
            if len(self.x_list) == 0 or len(self.n_list) == 0:
                self.__fail('the x and n grids must be non-empty')
            for n in self.n_list:
                if not 1 <= n <= constants.FLOAT_CAP:
                    self.__fail(f'n must lie in 1..{constants.FLOAT_CAP}, got {n}')

        if self.command == 'laplace':
            if len(self.t_list) == 0:
                self.__fail('the t grid must be non-empty')
            if self.x_max < constants.MIN_X_MAX:
                self.__fail(f'--x-max must be at least {constants.MIN_X_MAX:g}, got {self.x_max}')
            for t in self.t_list:
                if not t > 0:
                    self.__fail(f't must be positive, got {t}')
                if t * self.x_max < constants.MIN_TAIL_EXPONENT:
                    self.__fail(f't*x_max = {t * self.x_max:g} < {constants.MIN_TAIL_EXPONENT:g}: '
                                f'the truncated tail is not negligible')
        return self

    def __fail(self, message: str) -> None:
        logger.error(f'Invalid {self.command} configuration: {message}')
        raise ConfigError(message)
