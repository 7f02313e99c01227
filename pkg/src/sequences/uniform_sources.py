"""
Uniform point streams in the open unit hypercube.

Two kinds are provided:
- ``SobolStream``: Sobol low-discrepancy points built from a direction-number
  table, Gray-code ordered, skipping the all-zeros point at index 0
- ``MersenneTwisterStream``: NumPy's MT19937 pseudo-random generator

Both support ``partition`` into disjoint per-run blocks and ``snapshot``
for replaying the same points (path recycling).
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from src.errors import StreamExhaustedError
from src.models.params import SequenceKind

from .direction_numbers import WORD_BITS, DirectionNumberTable

logger = logging.getLogger(__name__)

SOBOL_SCALE = 2.0 ** -WORD_BITS
MAX_SOBOL_INDEX = (1 << WORD_BITS) - 1

_LOWEST = np.nextafter(0.0, 1.0)
_HIGHEST = np.nextafter(1.0, 0.0)


def _gray_code_point(directions: np.ndarray, index: int) -> np.ndarray:
    """Integer Sobol point: XOR of direction integers over the set bits of gray(index)."""
    gray = index ^ (index >> 1)
    point = np.zeros(directions.shape[1], dtype=np.uint32)
    bit = 0
    while gray:
        if gray & 1:
            point ^= directions[bit]
        gray >>= 1
        bit += 1
    return point


def sobol_point(table: DirectionNumberTable, index: int, dimension: int) -> np.ndarray:
    """
    Random-access Sobol point.

    Args:
        table: Direction-number table
        index: Position in the sequence, 1 <= index < 2^32
        dimension: Number of coordinates

    Returns:
        Point in (0, 1)^dimension

    Raises:
        CapacityError: If the table does not cover ``dimension``
        ValueError: If index is out of range
    """
    if not 1 <= index <= MAX_SOBOL_INDEX:
        raise ValueError(f"Sobol index must be in [1, 2^32), got {index}")
    directions = table.direction_matrix(dimension)
    return _gray_code_point(directions, index).astype(np.float64) * SOBOL_SCALE


class UniformStream(ABC):
    """A single-consumer source of points in (0, 1)^dimension with a cursor."""

    kind: SequenceKind

    def __init__(self, dimension: int, cursor: int, limit: Optional[int]):
        if dimension < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        self.dimension = dimension
        self.cursor = cursor
        self.limit = limit  # exclusive cursor bound of the block, if partitioned

    @property
    def remaining(self) -> Optional[int]:
        return None if self.limit is None else self.limit - self.cursor

    def _reserve(self, count: int) -> None:
        if count < 0:
            raise ValueError(f"count must be non-negative, got {count}")
        if self.limit is not None and self.cursor + count > self.limit:
            raise StreamExhaustedError(
                f"{self.kind.value} block exhausted: requested {count} points, "
                f"{self.limit - self.cursor} left"
            )

    @abstractmethod
    def draw(self, count: int) -> np.ndarray:
        """Next ``count`` points as a (count, dimension) array; advances the cursor."""

    @abstractmethod
    def partition(self, run_index: int, block_size: int) -> "UniformStream":
        """Independent stream for run ``run_index`` limited to ``block_size`` points."""

    @abstractmethod
    def snapshot(self) -> "UniformStream":
        """Independent copy positioned at the current cursor."""

    def next_point(self) -> np.ndarray:
        return self.draw(1)[0]


class SobolStream(UniformStream):
    """Sobol points; the point at a cursor depends only on (cursor, dimension, table)."""

    kind = SequenceKind.SOBOL

    def __init__(
        self,
        table: DirectionNumberTable,
        dimension: int,
        cursor: int = 1,
        limit: Optional[int] = None,
        *,
        _directions: Optional[np.ndarray] = None,
    ):
        super().__init__(dimension, cursor, limit)
        if cursor < 1:
            raise ValueError("Sobol cursor starts at 1 (the zero point is never emitted)")
        self.table = table
        self._directions = (
            _directions if _directions is not None else table.direction_matrix(dimension)
        )

    def draw(self, count: int) -> np.ndarray:
        self._reserve(count)
        if self.cursor + count - 1 > MAX_SOBOL_INDEX:
            raise StreamExhaustedError("Sobol sequence exhausted beyond 2^32 points")
        out = np.empty((count, self.dimension), dtype=np.uint32)
        if count:
            out[0] = _gray_code_point(self._directions, self.cursor)
            if count > 1:
                idx = np.arange(self.cursor + 1, self.cursor + count, dtype=np.uint64)
                lowest_bit = idx & (~idx + np.uint64(1))
                trailing_zeros = np.frexp(lowest_bit.astype(np.float64))[1] - 1
                steps = self._directions[trailing_zeros]
                steps[0] ^= out[0]
                np.bitwise_xor.accumulate(steps, axis=0, out=out[1:])
        self.cursor += count
        return out.astype(np.float64) * SOBOL_SCALE

    def partition(self, run_index: int, block_size: int) -> "SobolStream":
        if run_index < 0 or block_size < 1:
            raise ValueError("run_index must be >= 0 and block_size >= 1")
        start = 1 + run_index * block_size
        return SobolStream(
            self.table, self.dimension, start, start + block_size, _directions=self._directions
        )

    def snapshot(self) -> "SobolStream":
        return SobolStream(
            self.table, self.dimension, self.cursor, self.limit, _directions=self._directions
        )


class MersenneTwisterStream(UniformStream):
    """Pseudo-random points from MT19937, clamped strictly inside (0, 1)."""

    kind = SequenceKind.MT

    def __init__(
        self,
        dimension: int,
        seed: int,
        run_index: Optional[int] = None,
        limit: Optional[int] = None,
    ):
        super().__init__(dimension, 0, limit)
        self.seed = seed
        self.run_index = run_index
        entropy = seed if run_index is None else [seed, run_index]
        self._generator = np.random.Generator(np.random.MT19937(np.random.SeedSequence(entropy)))

    def draw(self, count: int) -> np.ndarray:
        self._reserve(count)
        raw = self._generator.random((count, self.dimension))
        self.cursor += count
        return np.clip(raw, _LOWEST, _HIGHEST)

    def partition(self, run_index: int, block_size: int) -> "MersenneTwisterStream":
        if run_index < 0 or block_size < 1:
            raise ValueError("run_index must be >= 0 and block_size >= 1")
        return MersenneTwisterStream(self.dimension, self.seed, run_index, limit=block_size)

    def snapshot(self) -> "MersenneTwisterStream":
        clone = MersenneTwisterStream(self.dimension, self.seed, self.run_index, self.limit)
        clone._generator.bit_generator.state = self._generator.bit_generator.state
        clone.cursor = self.cursor
        return clone


def make_stream(
    kind: SequenceKind | str,
    dimension: int,
    *,
    table: Optional[DirectionNumberTable] = None,
    seed: int = 0,
) -> UniformStream:
    """
    Create a stream of the requested kind.

    Args:
        kind: ``sobol`` or ``mt``
        dimension: Point dimension (number of time steps)
        table: Direction numbers, required for Sobol
        seed: Base seed for Mersenne Twister

    Raises:
        CapacityError: If the table does not cover ``dimension``
    """
    kind = SequenceKind(kind)
    if kind is SequenceKind.SOBOL:
        if table is None:
            raise ValueError("a direction-number table is required for Sobol streams")
        return SobolStream(table, dimension)
    return MersenneTwisterStream(dimension, seed)
