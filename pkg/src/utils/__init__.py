"""
Utility modules for the HLV QMC toolkit.
"""

from .file_utils import (
    ensure_directory,
    read_json_file,
    write_json_file,
    write_csv_file,
    read_csv_file,
    format_float,
    FULL_PRECISION,
)
from .logging_utils import configure_logging, stderr_console

__all__ = [
    # File utilities
    "ensure_directory",
    "read_json_file",
    "write_json_file",
    "write_csv_file",
    "read_csv_file",
    "format_float",
    "FULL_PRECISION",
    # Logging
    "configure_logging",
    "stderr_console",
]
