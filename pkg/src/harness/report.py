"""
CSV emission of convergence reports.

Schema:
- ``<quantity>_K<strike>.csv``: method, N, mean_estimate, rmse (one row per method and N)
- ``summary.csv``: quantity, strike, method, alpha, r_squared, reference_value
  (alpha and r_squared are empty when no rate could be fitted)
- ``config.json``: the resolved experiment configuration

Floats are written with 17 significant digits, so parsing recovers them exactly.
"""

import logging
import math
from pathlib import Path

import pandas as pd

from src.models.experiment import ConvergenceReport
from src.models.params import Quantity
from src.utils.file_utils import (
    ensure_directory,
    format_float,
    read_csv_file,
    write_csv_file,
    write_json_file,
)

logger = logging.getLogger(__name__)

CELL_COLUMNS = ["method", "N", "mean_estimate", "rmse"]
SUMMARY_COLUMNS = ["quantity", "strike", "method", "alpha", "r_squared", "reference_value"]
SUMMARY_FILE = "summary.csv"
CONFIG_FILE = "config.json"


def cell_filename(quantity: Quantity | str, strike: float) -> str:
    """File name of one (quantity, strike) table; distinct strikes give distinct names."""
    return f"{Quantity(quantity).value}_K{format_float(strike)}.csv"


def emit_report(report: ConvergenceReport, destination: str | Path) -> list[Path]:
    """
    Write the report CSVs and the config into ``destination``.

    Args:
        report: Completed convergence report
        destination: Output directory, created if missing

    Returns:
        Paths of the written files

    Raises:
        OSError: If the destination is not writable
    """
    out_dir = ensure_directory(destination)
    written = []

    tables: dict[tuple[Quantity, float], list[dict]] = {}
    summary = []
    for cell in report.cells:
        rows = tables.setdefault((cell.quantity, cell.strike), [])
        for point in cell.points:
            rows.append({
                "method": cell.method.value,
                "N": point.n_paths,
                "mean_estimate": point.mean_estimate,
                "rmse": point.rmse,
            })
        summary.append({
            "quantity": cell.quantity.value,
            "strike": cell.strike,
            "method": cell.method.value,
            "alpha": cell.fit.alpha if cell.fit else math.nan,
            "r_squared": cell.fit.r_squared if cell.fit else math.nan,
            "reference_value": cell.reference_value,
        })

    for (quantity, strike), rows in tables.items():
        frame = pd.DataFrame(rows, columns=CELL_COLUMNS)
        written.append(write_csv_file(out_dir / cell_filename(quantity, strike), frame))

    written.append(write_csv_file(out_dir / SUMMARY_FILE, pd.DataFrame(summary, columns=SUMMARY_COLUMNS)))
    written.append(write_json_file(out_dir / CONFIG_FILE, report.config.model_dump(mode="json")))
    logger.info("Wrote %d files to %s", len(written), out_dir)
    return written


def read_summary(directory: str | Path) -> pd.DataFrame:
    """Parse ``summary.csv``."""
    return read_csv_file(Path(directory) / SUMMARY_FILE)


def read_cell_table(directory: str | Path, quantity: Quantity | str, strike: float) -> pd.DataFrame:
    """Parse the per-(quantity, strike) RMSE table."""
    return read_csv_file(Path(directory) / cell_filename(quantity, strike))
