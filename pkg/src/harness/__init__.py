"""
Convergence studies and their CSV reports.
"""

from .convergence import (
    StudyRunner,
    run_replications,
    reference_value,
    rmse,
    fit_convergence_rate,
    run_study,
)
from .report import emit_report, read_summary, read_cell_table, cell_filename

__all__ = [
    "StudyRunner",
    "run_replications",
    "reference_value",
    "rmse",
    "fit_convergence_rate",
    "run_study",
    "emit_report",
    "read_summary",
    "read_cell_table",
    "cell_filename",
]
