"""
Logging setup for the command line.

Log records go to standard error through rich, so standard output carries
only results (tables and CSV).
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

stderr_console = Console(stderr=True)


def configure_logging(level: str | int = "INFO") -> None:
    """Route the root logger to a RichHandler on stderr."""
    logging.basicConfig(
        level=level.upper() if isinstance(level, str) else level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=stderr_console, show_path=False, rich_tracebacks=True)],
        force=True,
    )
