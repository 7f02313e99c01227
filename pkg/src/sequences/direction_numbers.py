"""
Sobol direction numbers.

Reads the public Joe-Kuo table format (``d s a m_1 ... m_s`` per line, one
line per dimension >= 2, optional header) and expands a table into the
32-bit direction integers used by the generator.

When no file is configured, the ``new-joe-kuo-6.21201`` data shipped with
SciPy is used.
"""

import io
import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.errors import CapacityError, DirectionNumberParseError

logger = logging.getLogger(__name__)

WORD_BITS = 32


class DirectionNumberTable(BaseModel):
    """Primitive polynomials and initial direction integers for dimensions 2..max_dimension.

    Dimension 1 is implicit (all direction integers equal 1), so entry ``k``
    of each tuple describes dimension ``k + 2``.
    """
    model_config = ConfigDict(frozen=True)

    degrees: tuple[int, ...] = ()
    coefficients: tuple[int, ...] = ()
    initial: tuple[tuple[int, ...], ...] = ()
    source: str = Field(default="<memory>", description="File path or bundle the rows came from")

    @property
    def max_dimension(self) -> int:
        return len(self.degrees) + 1

    def check_capacity(self, dimension: int) -> None:
        if dimension < 1:
            raise CapacityError(f"dimension must be positive, got {dimension}")
        if dimension > self.max_dimension:
            raise CapacityError(
                f"dimension {dimension} exceeds direction-number table capacity "
                f"{self.max_dimension} ({self.source})"
            )

    def direction_matrix(self, dimension: int) -> np.ndarray:
        """Direction integers ``V[k, j] = m_{j,k+1} << (32 - k - 1)``, shape (32, dimension), uint32."""
        self.check_capacity(dimension)
        v = np.zeros((WORD_BITS, dimension), dtype=np.uint32)
        for bit in range(WORD_BITS):
            v[bit, 0] = 1 << (WORD_BITS - 1 - bit)
        for j in range(1, dimension):
            v[:, j] = _expand_dimension(
                self.degrees[j - 1], self.coefficients[j - 1], self.initial[j - 1]
            )
        return v


def _expand_dimension(s: int, a: int, m: tuple[int, ...]) -> list[int]:
    """Run the direction-number recurrence for one dimension."""
    v = [0] * (WORD_BITS + 1)  # 1-based
    top = min(s, WORD_BITS)
    for k in range(1, top + 1):
        v[k] = m[k - 1] << (WORD_BITS - k)
    for k in range(s + 1, WORD_BITS + 1):
        v[k] = v[k - s] ^ (v[k - s] >> s)
        for i in range(1, s):
            if (a >> (s - 1 - i)) & 1:
                v[k] ^= v[k - i]
    return v[1:]


def _is_header(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return True
    return False


def load_direction_numbers(text: str | TextIO, source: str = "<text>") -> DirectionNumberTable:
    """
    Parse a Joe-Kuo format direction-number table.

    Args:
        text: File contents or an open text stream
        source: Label used in error messages

    Returns:
        Immutable table; max dimension = number of data lines + 1

    Raises:
        DirectionNumberParseError: Wrong token count, non-integer token,
            even m_k, m_k >= 2^k or a dimension out of sequence,
            naming the offending line
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    degrees: list[int] = []
    coefficients: list[int] = []
    initial: list[tuple[int, ...]] = []
    header_allowed = True

    for line_number, raw in enumerate(stream, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if header_allowed and _is_header(tokens[0]):
            header_allowed = False
            continue
        header_allowed = False
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise DirectionNumberParseError(line_number, f"non-integer token in {raw.strip()!r}")
        if len(values) < 4:
            raise DirectionNumberParseError(line_number, "expected 'd s a m_1 ... m_s'")
        d, s, a = values[:3]
        expected = len(degrees) + 2
        if d != expected:
            raise DirectionNumberParseError(line_number, f"expected dimension {expected}, found {d}")
        m = values[3:]
        if s < 1:
            raise DirectionNumberParseError(line_number, f"polynomial degree must be positive, got {s}")
        if len(m) != s:
            raise DirectionNumberParseError(
                line_number, f"degree {s} needs {s} direction integers, found {len(m)}"
            )
        if not 0 <= a < 1 << (s - 1):
            raise DirectionNumberParseError(line_number, f"coefficient code {a} invalid for degree {s}")
        for k, m_k in enumerate(m, start=1):
            if m_k <= 0 or m_k % 2 == 0:
                raise DirectionNumberParseError(line_number, f"m_{k}={m_k} must be odd and positive")
            if m_k >= 1 << k:
                raise DirectionNumberParseError(line_number, f"m_{k}={m_k} must be below 2^{k}")
        degrees.append(s)
        coefficients.append(a)
        initial.append(tuple(m))

    table = DirectionNumberTable(
        degrees=tuple(degrees), coefficients=tuple(coefficients), initial=tuple(initial), source=source
    )
    logger.debug("Loaded %d direction-number rows from %s", len(degrees), source)
    return table


def load_direction_number_file(path: str | Path) -> DirectionNumberTable:
    """Read a direction-number table from disk (OSError propagates)."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        return load_direction_numbers(f, source=str(path))


def scipy_direction_numbers(max_dimension: Optional[int] = None) -> DirectionNumberTable:
    """
    Build a table from the Joe-Kuo data bundled with SciPy.

    SciPy stores each primitive polynomial as an integer including the
    leading and constant terms, ``p = 2^s + 2a + 1``.
    """
    resource = resources.files("scipy.stats") / "_sobol_direction_numbers.npz"
    with resources.as_file(resource) as npz_path, np.load(npz_path) as data:
        poly = data["poly"]
        vinit = data["vinit"]
    limit = len(poly) if max_dimension is None else min(max_dimension, len(poly))

    degrees: list[int] = []
    coefficients: list[int] = []
    initial: list[tuple[int, ...]] = []
    for j in range(1, limit):
        p = int(poly[j])
        s = p.bit_length() - 1
        degrees.append(s)
        coefficients.append((p >> 1) & ((1 << (s - 1)) - 1))
        initial.append(tuple(int(x) for x in vinit[j, :s]))
    return DirectionNumberTable(
        degrees=tuple(degrees),
        coefficients=tuple(coefficients),
        initial=tuple(initial),
        source="scipy:new-joe-kuo-6.21201",
    )


@lru_cache(maxsize=8)
def resolve_direction_numbers(path: Optional[Path] = None) -> DirectionNumberTable:
    """Table from ``path`` if given, otherwise the SciPy-bundled table."""
    if path is not None:
        return load_direction_number_file(path)
    return scipy_direction_numbers()
