"""
File system utilities for reports and experiment files.

This module provides directory creation, JSON reading/writing and
lossless CSV reading/writing of pandas frames.
"""

import json
from pathlib import Path
from typing import Any

import pandas as pd

# 17 significant digits round-trip every IEEE double
FULL_PRECISION = "%.17g"


def ensure_directory(path: str | Path) -> Path:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        path: Path to the directory

    Returns:
        Path object for the directory

    Raises:
        OSError: If the directory cannot be created
    """
    dir_path = Path(path)
    dir_path.mkdir(parents=True, exist_ok=True)
    return dir_path


def read_json_file(file_path: str | Path) -> Any:
    """
    Read and parse a JSON file.

    Args:
        file_path: Path to the JSON file

    Returns:
        Parsed JSON content

    Raises:
        FileNotFoundError: If the file doesn't exist
        json.JSONDecodeError: If the file contains invalid JSON
    """
    path = Path(file_path)

    if not path.exists():
        raise FileNotFoundError(f"JSON file not found: {file_path}")

    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json_file(file_path: str | Path, data: Any, indent: int = 2) -> Path:
    """
    Write data to a JSON file, creating parent directories.

    Args:
        file_path: Path to the output file
        data: Data to write (must be JSON-serializable)
        indent: Number of spaces for indentation

    Returns:
        Path to the written file
    """
    path = Path(file_path)
    ensure_directory(path.parent)

    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=indent)
        f.write("\n")

    return path


def format_float(value: float) -> str:
    """Text of ``value`` with the precision used in CSV files; parses back to the same float."""
    return FULL_PRECISION % value


def write_csv_file(file_path: str | Path, frame: pd.DataFrame) -> Path:
    """Write a frame without index, floats at full precision."""
    path = Path(file_path)
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, float_format=FULL_PRECISION, lineterminator="\n")
    return path


def read_csv_file(file_path: str | Path) -> pd.DataFrame:
    """Read a CSV written by ``write_csv_file`` back without losing float bits."""
    return pd.read_csv(Path(file_path), float_precision="round_trip")
