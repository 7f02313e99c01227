"""
Exception hierarchy for the HLV QMC toolkit.

Every error derives from HlvQmcError and from the builtin that best
describes it, so callers may catch either.
"""


class HlvQmcError(Exception):
    """Base class for all toolkit errors."""


class DirectionNumberParseError(HlvQmcError, ValueError):
    """A direction-number file line is malformed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class CapacityError(HlvQmcError, ValueError):
    """Requested dimension exceeds what the direction-number table supports."""


class StreamExhaustedError(HlvQmcError, RuntimeError):
    """A uniform stream (or one of its partition blocks) has no points left."""


class DimensionError(HlvQmcError, ValueError):
    """Array shapes do not match the time grid or stream dimension."""


class DomainError(HlvQmcError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class NoSolutionError(HlvQmcError, ValueError):
    """Implied volatility cannot be found because the price violates no-arbitrage bounds."""


class ShiftDomainError(HlvQmcError, ValueError):
    """A finite-difference bump pushes a parameter outside its valid range."""


class InsufficientDataError(HlvQmcError, ValueError):
    """Not enough usable points to fit a convergence rate."""


__all__ = [
    "HlvQmcError",
    "DirectionNumberParseError",
    "CapacityError",
    "StreamExhaustedError",
    "DimensionError",
    "DomainError",
    "NoSolutionError",
    "ShiftDomainError",
    "InsufficientDataError",
]
