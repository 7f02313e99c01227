"""
Uniform point sources and the Gaussian transform.
"""

from .direction_numbers import (
    DirectionNumberTable,
    load_direction_numbers,
    load_direction_number_file,
    scipy_direction_numbers,
    resolve_direction_numbers,
)
from .uniform_sources import (
    UniformStream,
    SobolStream,
    MersenneTwisterStream,
    make_stream,
    sobol_point,
)
from .normal_transform import inv_normal_cdf, uniforms_to_gaussians

__all__ = [
    "DirectionNumberTable",
    "load_direction_numbers",
    "load_direction_number_file",
    "scipy_direction_numbers",
    "resolve_direction_numbers",
    "UniformStream",
    "SobolStream",
    "MersenneTwisterStream",
    "make_stream",
    "sobol_point",
    "inv_normal_cdf",
    "uniforms_to_gaussians",
]
