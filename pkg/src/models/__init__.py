"""
Data models for the HLV QMC toolkit.
"""

from .params import (
    SequenceKind,
    Construction,
    OptionStyle,
    Quantity,
    Method,
    HlvParams,
    OptionSpec,
    GreekShifts,
    PriceEstimate,
    GreekReport,
)
from .experiment import (
    ExperimentConfig,
    ConvergencePoint,
    RateFit,
    ConvergenceCell,
    ConvergenceReport,
)
from .config import Settings, get_settings

__all__ = [
    # Parameters and results
    "SequenceKind",
    "Construction",
    "OptionStyle",
    "Quantity",
    "Method",
    "HlvParams",
    "OptionSpec",
    "GreekShifts",
    "PriceEstimate",
    "GreekReport",
    # Convergence studies
    "ExperimentConfig",
    "ConvergencePoint",
    "RateFit",
    "ConvergenceCell",
    "ConvergenceReport",
    # Config
    "Settings",
    "get_settings",
]
