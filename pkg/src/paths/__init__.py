"""
Wiener path construction and the hyperbolic local volatility model.
"""

from .construction import (
    TimeGrid,
    BridgeStep,
    BridgePlan,
    incremental_path,
    build_bridge_plan,
    bridge_path,
    build_paths,
    construction_matrix,
)
from .hlv import local_vol, log_local_vol, euler_log_paths, euler_log_path

__all__ = [
    "TimeGrid",
    "BridgeStep",
    "BridgePlan",
    "incremental_path",
    "build_bridge_plan",
    "bridge_path",
    "build_paths",
    "construction_matrix",
    "local_vol",
    "log_local_vol",
    "euler_log_paths",
    "euler_log_path",
]
