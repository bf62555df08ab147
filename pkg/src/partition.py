"""
Integer partitions and their enumeration.
"""

from __future__ import annotations

import math
import logging
from typing import Iterator

import src.constants as constants
from src.errors import ComputationRefused


logger = logging.getLogger(__name__)
console = logging.getLogger('console')


class Partition(tuple):
    """
    A partition of n: a weakly decreasing tuple of positive integers.
    """

    def __new__(cls, parts=()):
        parts = tuple(parts)
        for idx, part in enumerate(parts):
            if not isinstance(part, int) or part < 1:
                logger.error(f'Partition parts must be positive integers: {parts}')
                raise ValueError(f'Partition parts must be positive integers: {parts}')
            if idx > 0 and part > parts[idx - 1]:
                logger.error(f'Partition parts must be weakly decreasing: {parts}')
                raise ValueError(f'Partition parts must be weakly decreasing: {parts}')
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        """The number being partitioned."""
        return sum(self)

    @property
    def largest(self) -> int:
        """The largest part, or 0 for the empty partition."""
        return self[0] if self else 0

    @property
    def length(self) -> int:
        """The number of parts."""
        return len(self)

    @property
    def weight(self) -> int:
        """The product of the parts."""
        return math.prod(self)

    def __repr__(self) -> str:
        return f'Partition{tuple(self)}'


def enumerate_partitions(n: int, max_part: int, cap: int = None) -> Iterator[Partition]:
    """
    Yield every partition of n whose largest part is exactly max_part,
    in lexicographically decreasing order.

    Parameters:
        n: The number to partition.
        max_part: The required largest part.
        cap: Refuse n above this bound. Defaults to constants.ORACLE_CAP.
    """
    cap = constants.ORACLE_CAP if cap is None else cap

    if n > cap:
        logger.error(f'Refusing to enumerate partitions of {n}, the oracle cap is {cap}')
        raise ComputationRefused(
            f'Partitions of {n} exceed the oracle cap of {cap} (the count grows exponentially).')

    if not 1 <= max_part <= n:
        logger.error(f'Invalid largest part {max_part} for n={n}')
        raise ComputationRefused(f'Largest part must satisfy 1 <= max_part <= n, got {max_part} for n={n}.')

    for rest in _bounded_partitions(n - max_part, max_part):
        yield Partition((max_part,) + rest)


def _bounded_partitions(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """
    Partitions of n with every part at most bound, largest first part first.
    """
    if n == 0:
        yield ()
        return

    for first in range(min(n, bound), 0, -1):
        for rest in _bounded_partitions(n - first, first):
            yield (first,) + rest
