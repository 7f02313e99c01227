"""
Pytest configuration and shared fixtures.

This module provides fixtures and configuration for all tests in the project.
"""

import tempfile
from pathlib import Path
from typing import Generator

import pytest

from src.models.config import get_settings
from src.models.params import HlvParams
from src.sequences.direction_numbers import DirectionNumberTable, scipy_direction_numbers

# First rows of the Joe-Kuo new-joe-kuo-6.21201 file, header included
JOE_KUO_HEAD = """d       s       a       m_i
2       1       0       1
3       2       1       1 3
4       3       1       1 3 1
"""


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture(scope="session")
def sobol_table() -> DirectionNumberTable:
    """Direction numbers bundled with SciPy, enough for 256 time steps."""
    return scipy_direction_numbers(max_dimension=512)


@pytest.fixture
def joe_kuo_text() -> str:
    """Header plus three data lines in Joe-Kuo format."""
    return JOE_KUO_HEAD


@pytest.fixture
def desk_params() -> HlvParams:
    """S0=100, r=3%, nu=30%, beta=0.5."""
    return HlvParams(nu=0.3, beta=0.5, rate=0.03, spot=100.0)


@pytest.fixture
def deterministic_params() -> HlvParams:
    """Zero volatility (outside the validated domain, tests only): S(t) = S0 e^{rt}."""
    return HlvParams.model_construct(nu=0.0, beta=0.5, rate=0.03, spot=100.0)


@pytest.fixture
def clear_settings():
    """Reset the cached settings around a test that changes the environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
