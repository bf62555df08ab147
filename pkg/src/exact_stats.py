"""
Exact and floating-point tables of b(n,k), the sum of 1/w over the
partitions of n whose largest part is k, where w is the product of the parts.

Both tables are filled from the recurrence

    b(n,k) = (1/k) * sum_{i=1}^{min(k, n-k)} b(n-k, i),    b(n,n) = 1/n,

in increasing n. Capping the inner sum at n-k makes the base case the
single-part partition, which is what brute-force enumeration gives.
"""

import math
import logging
import itertools
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

import src.constants as constants
from src.errors import ComputationRefused
from src.partition import enumerate_partitions


logger = logging.getLogger(__name__)
console = logging.getLogger('console')


####################################################################################################
#  TABLES
####################################################################################################

class ExactTriangle:
    """
    Triangular table of exact rationals b(n,k) for 1 <= k <= n <= n_max.
    """

    def __init__(self, rows: list[list[Fraction]]):
        if len(rows) == 0:
            logger.error('An exact triangle needs at least one row.')
            raise ValueError('An exact triangle needs at least one row.')

        for idx, row in enumerate(rows, start=1):
            if len(row) != idx:
                logger.error(f'Row {idx} of the exact triangle has {len(row)} entries')
                raise ValueError(f'Row {idx} of the exact triangle must have {idx} entries.')

        self.__rows = [tuple(row) for row in rows]
        self.__totals = [sum(row, Fraction(0)) for row in self.__rows]

    @property
    def n_max(self) -> int:
        """The largest n in the table."""
        return len(self.__rows)

    def row(self, n: int) -> tuple[Fraction, ...]:
        """The entries b(n,1), ..., b(n,n)."""
        self.__check_n(n)
        return self.__rows[n - 1]

    def entry(self, n: int, k: int) -> Fraction:
        """
        Returns b(n,k). Zero for k > n, since no such partitions exist.
        """
        self.__check_n(n)
        if k < 1:
            logger.error(f'Invalid k={k} for row n={n}')
            raise ComputationRefused(f'k must be positive, got {k}.')
        if k > n:
            return Fraction(0)
        return self.__rows[n - 1][k - 1]

    def total(self, n: int) -> Fraction:
        """Returns b(n), the row sum."""
        self.__check_n(n)
        return self.__totals[n - 1]

    def __check_n(self, n: int) -> None:
        if not 1 <= n <= self.n_max:
            logger.error(f'n={n} is outside the exact triangle (n_max={self.n_max})')
            raise ComputationRefused(f'n={n} is outside 1..{self.n_max}.')


class FloatTriangle:
    """
    Triangular table of float b(n,k) with per-row prefix sums P(n,k).

    Rows are packed into one array: row n occupies [offset(n), offset(n) + n).
    """

    def __init__(self, n_max: int, values: np.ndarray, prefix: np.ndarray):
        expected = n_max * (n_max + 1) // 2
        if values.shape != (expected,) or prefix.shape != (expected,):
            logger.error(f'Packed arrays do not match n_max={n_max}: {values.shape}, {prefix.shape}')
            raise ValueError(f'Packed arrays must hold {expected} entries for n_max={n_max}.')

        self.__n_max = n_max
        self.__values = values
        self.__prefix = prefix
        self.__values.setflags(write=False)
        self.__prefix.setflags(write=False)

    @property
    def n_max(self) -> int:
        """The largest n in the table."""
        return self.__n_max

    @staticmethod
    def offset(n: int) -> int:
        """Index of b(n,1) in the packed arrays."""
        return n * (n - 1) // 2

    def row(self, n: int) -> np.ndarray:
        """Read-only view of b(n,1), ..., b(n,n)."""
        self.__check_n(n)
        start = self.offset(n)
        return self.__values[start:start + n]

    def prefix_row(self, n: int) -> np.ndarray:
        """Read-only view of P(n,1), ..., P(n,n)."""
        self.__check_n(n)
        start = self.offset(n)
        return self.__prefix[start:start + n]

    def entry(self, n: int, k: int) -> float:
        """Returns b(n,k), zero for k > n."""
        self.__check_n(n)
        if k < 1:
            logger.error(f'Invalid k={k} for row n={n}')
            raise ComputationRefused(f'k must be positive, got {k}.')
        if k > n:
            return 0.0
        return float(self.__values[self.offset(n) + k - 1])

    def prefix(self, n: int, k: int) -> float:
        """Returns P(n,k) = b(n,1) + ... + b(n,k)."""
        self.__check_n(n)
        k = min(k, n)
        if k < 1:
            return 0.0
        return float(self.__prefix[self.offset(n) + k - 1])

    def total(self, n: int) -> float:
        """Returns b(n) = P(n,n)."""
        return self.prefix(n, n)

    def __check_n(self, n: int) -> None:
        if not 1 <= n <= self.__n_max:
            logger.error(f'n={n} is outside the float triangle (n_max={self.__n_max})')
            raise ComputationRefused(f'n={n} is outside 1..{self.__n_max}.')


####################################################################################################
#  OPERATIONS
####################################################################################################

def brute_force_b(n: int, k: int, cap: int = None) -> Fraction:
    """
    Sum of 1/w over all partitions of n with largest part k, by enumeration.
    """
    if k > n:
        return Fraction(0)
    return sum((Fraction(1, p.weight) for p in enumerate_partitions(n, k, cap)), Fraction(0))


def build_exact_triangle(n_max: int, cap: int = None) -> ExactTriangle:
    """
    Build the exact triangle up to n_max with rational arithmetic.

    Denominators grow super-polynomially, so n_max is capped
    (constants.EXACT_CAP by default); use the float path beyond it.
    """
    cap = constants.EXACT_CAP if cap is None else cap

    if n_max < 1:
        logger.error(f'Invalid n_max for the exact triangle: {n_max}')
        raise ComputationRefused(f'n_max must be at least 1, got {n_max}.')
    if n_max > cap:
        logger.error(f'n_max={n_max} exceeds the exact cap {cap}')
        raise ComputationRefused(
            f'n_max={n_max} exceeds the exact-arithmetic cap of {cap}; use the float triangle instead.')

    logger.info(f'Building exact triangle up to n={n_max}...')
    rows: list[list[Fraction]] = []
    prefixes: list[list[Fraction]] = []

    for n in range(1, n_max + 1):
        row = [Fraction(0)] * n
        for k in range(1, n):
            m = n - k
            row[k - 1] = prefixes[m - 1][min(k, m) - 1] / k
        row[n - 1] = Fraction(1, n)
        rows.append(row)
        prefixes.append(list(itertools.accumulate(row)))

    logger.info(f'Built exact triangle with {n_max * (n_max + 1) // 2} entries.')
    return ExactTriangle(rows)


def b_total(table: ExactTriangle, n: int) -> Fraction:
    """Exact b(n) from the table."""
    return table.total(n)


def build_float_triangle(n_max: int, budget: int = None, compensated: bool = False) -> FloatTriangle:
    """
    Build the float triangle up to n_max in O(n_max^2) work.

    Each b(n,k) for k < n is P(n-k, min(k, n-k)) / k, read from the prefix
    sums of earlier rows; a row is computed in one vectorised step.

    Parameters:
        n_max: The largest n.
        budget: Refuse n_max above this bound. Defaults to constants.FLOAT_CAP.
        compensated: Accumulate prefix sums with Neumaier compensation.
    """
    budget = constants.FLOAT_CAP if budget is None else budget

    if n_max < 1:
        logger.error(f'Invalid n_max for the float triangle: {n_max}')
        raise ComputationRefused(f'n_max must be at least 1, got {n_max}.')
    if n_max > budget:
        megabytes = 2 * 8 * n_max * (n_max + 1) // 2 / 2**20
        logger.error(f'n_max={n_max} exceeds the float budget {budget}')
        raise ComputationRefused(
            f'n_max={n_max} exceeds the memory budget of {budget}: memory grows quadratically '
            f'(about {megabytes:.0f} MiB for this request).')

    logger.info(f'Building float triangle up to n={n_max} (compensated={compensated})...')
    size = n_max * (n_max + 1) // 2
    values = np.zeros(size, dtype=np.float64)
    prefix = np.zeros(size, dtype=np.float64)

    # offsets[m] is the packed index of b(m,1)
    offsets = np.arange(n_max + 1, dtype=np.int64)
    offsets = offsets * (offsets - 1) // 2

    for n in range(1, n_max + 1):
        start = offsets[n]
        if n > 1:
            k = np.arange(1, n, dtype=np.int64)
            m = n - k
            values[start:start + n - 1] = prefix[offsets[m] + np.minimum(k, m) - 1] / k
        values[start + n - 1] = 1.0 / n

        row = values[start:start + n]
        prefix[start:start + n] = _compensated_cumsum(row) if compensated else np.cumsum(row)

    logger.info(f'Built float triangle with {size} entries.')
    return FloatTriangle(n_max, values, prefix)


def _compensated_cumsum(row: np.ndarray) -> np.ndarray:
    """
    Running sums in ascending order with Neumaier compensation.
    """
    out = np.empty_like(row)
    total = 0.0
    carry = 0.0
    for idx, value in enumerate(row.tolist()):
        t = total + value
        if abs(total) >= abs(value):
            carry += (total - t) + value
        else:
            carry += (value - t) + total
        total = t
        out[idx] = total + carry
    return out


def scale_by_e_gamma(v):
    """
    Returns e^gamma * v, the rescaling that makes the limiting density 1.
    """
    return math.exp(constants.EULER_GAMMA) * v


def max_relative_error(exact: ExactTriangle, flt: FloatTriangle) -> tuple[float, int, int]:
    """
    Worst relative deviation of the float table from the exact one over
    their common range.

    Returns:
        The error and the (n, k) where it occurs.
    """
    worst, where_n, where_k = 0.0, 1, 1
    for n in range(1, min(exact.n_max, flt.n_max) + 1):
        approx = flt.row(n)
        for k, value in enumerate(exact.row(n), start=1):
            err = abs(float(approx[k - 1]) - float(value)) / float(value)
            if err > worst:
                worst, where_n, where_k = err, n, k
    return worst, where_n, where_k


def table_rows(flt: FloatTriangle, exact: Optional[ExactTriangle] = None) -> Iterator[dict]:
    """
    Rows of the table export, n ascending then k ascending.

    Exact columns are None for rows beyond the exact table.
    """
    exact_n_max = exact.n_max if exact is not None else 0
    for n in range(1, flt.n_max + 1):
        approx = flt.row(n)
        exact_row = exact.row(n) if n <= exact_n_max else None
        for k in range(1, n + 1):
            value = exact_row[k - 1] if exact_row is not None else None
            yield {
                'n': n,
                'k': k,
                'value_exact_num': value.numerator if value is not None else None,
                'value_exact_den': value.denominator if value is not None else None,
                'value_float': float(approx[k - 1]),
            }
