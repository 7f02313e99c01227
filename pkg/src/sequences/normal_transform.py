"""
Uniform to standard normal conversion through the inverse cumulative normal.

Coordinates are transformed one by one, so coordinate j of a uniform point
drives Gaussian j.
"""

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import ndtri

from src.errors import DomainError


def inv_normal_cdf(u: float) -> float:
    """
    Inverse of the standard normal distribution function.

    Args:
        u: Probability strictly inside (0, 1)

    Returns:
        z with Phi(z) = u

    Raises:
        DomainError: If u <= 0 or u >= 1
    """
    if not 0.0 < u < 1.0:
        raise DomainError(f"inverse normal CDF needs 0 < u < 1, got {u}")
    return float(ndtri(u))


def uniforms_to_gaussians(points: ArrayLike) -> np.ndarray:
    """
    Element-wise inverse normal transform of uniform points.

    Args:
        points: Array of any shape with entries strictly inside (0, 1)

    Returns:
        Array of standard normal variates with the same shape
    """
    u = np.asarray(points, dtype=np.float64)
    if u.size and not (np.all(u > 0.0) and np.all(u < 1.0)):
        raise DomainError("uniform coordinates must lie strictly inside (0, 1)")
    return ndtri(u)
