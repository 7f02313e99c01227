"""
Configuration management using Pydantic Settings.

This module provides centralized runtime configuration for the toolkit,
loading values from environment variables (prefix ``HLVQMC_``) and .env files.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    All settings can be overridden by environment variables, e.g.
    ``HLVQMC_DIRECTION_NUMBERS=/data/new-joe-kuo-6.21201``.
    """

    model_config = SettingsConfigDict(
        env_prefix="HLVQMC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # -------------------------------------------------------------------------
    # Sequence generation
    # -------------------------------------------------------------------------
    direction_numbers: Optional[Path] = Field(
        default=None,
        description="Joe-Kuo format direction-number file (defaults to the table bundled with SciPy)"
    )
    seed: int = Field(
        default=20240611,
        ge=0,
        description="Base seed for Mersenne Twister streams"
    )

    # -------------------------------------------------------------------------
    # Simulation engine
    # -------------------------------------------------------------------------
    threads: Optional[int] = Field(
        default=None,
        ge=1,
        description="Worker threads for chunk evaluation (defaults to all cores)"
    )
    chunk_size: int = Field(
        default=4096,
        ge=1,
        description="Paths evaluated per chunk"
    )

    # -------------------------------------------------------------------------
    # Output
    # -------------------------------------------------------------------------
    default_output_dir: Path = Field(
        default=Path("./output"),
        description="Default directory for convergence reports"
    )

    # -------------------------------------------------------------------------
    # Logging
    # -------------------------------------------------------------------------
    log_level: str = Field(
        default="INFO",
        description="Log level"
    )

    @property
    def effective_threads(self) -> int:
        """Configured thread count, falling back to the number of cores."""
        return self.threads or os.cpu_count() or 1

    def ensure_output_dir(self) -> Path:
        """Ensure the output directory exists and return its path."""
        self.default_output_dir.mkdir(parents=True, exist_ok=True)
        return self.default_output_dir


@lru_cache
def get_settings() -> Settings:
    """
    Get the application settings (cached singleton).

    Returns:
        Settings instance loaded from environment
    """
    return Settings()
