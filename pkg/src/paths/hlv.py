"""
Hyperbolic local volatility model.

The model is simulated on the normalized spot X = S / S0 (X0 = 1), so the
hyperbola of the local volatility has its kink at the money regardless of
the spot level. Paths are advanced in log space with the Euler-Maruyama
scheme

    Y(t_{i+1}) = Y(t_i) + (r - sigma(Y)^2 / 2) dt + sigma(Y) (W(t_{i+1}) - W(t_i))

where sigma(Y) = local_vol(e^Y) / e^Y, which keeps every price positive.
"""

import numpy as np
from numpy.typing import ArrayLike

from src.errors import DimensionError, DomainError
from src.models.params import HlvParams

from .construction import TimeGrid


def local_vol(s: ArrayLike, nu: float, beta: float) -> np.ndarray | float:
    """
    Absolute local volatility of the normalized spot.

    sigma~(s) = nu * ((1 - b + b^2) / b * s + (b - 1) / b * (sqrt(s^2 + b^2 (1 - s)^2) - b))

    Args:
        s: Normalized spot(s), strictly positive
        nu: Volatility level
        beta: Skew parameter in (0, 1]

    Returns:
        Local volatility with the shape of ``s`` (a float for scalar input)

    Raises:
        DomainError: If any s <= 0
    """
    x = np.asarray(s, dtype=np.float64)
    if np.any(x <= 0.0):
        raise DomainError("local volatility is defined for positive spot only")
    linear = (1.0 - beta + beta * beta) / beta
    curve = (beta - 1.0) / beta
    vol = nu * (linear * x + curve * (np.sqrt(x * x + beta * beta * (1.0 - x) ** 2) - beta))
    return float(vol) if vol.ndim == 0 else vol


def log_local_vol(y: ArrayLike, nu: float, beta: float) -> np.ndarray | float:
    """Relative volatility sigma(y) = local_vol(e^y) / e^y of the log normalized spot."""
    x = np.exp(np.asarray(y, dtype=np.float64))
    vol = local_vol(x, nu, beta) / x
    return float(vol) if np.ndim(vol) == 0 else vol


def euler_log_paths(w: ArrayLike, params: HlvParams, grid: TimeGrid) -> np.ndarray:
    """
    Log normalized spot Y(t_1..t_n) driven by Wiener path(s) ``w``.

    Args:
        w: Wiener values W(t_1..t_n), shape (n,) or (paths, n)
        params: Model parameters (spot is not used, X0 = 1)
        grid: Simulation grid the paths were built on

    Returns:
        Array with the shape of ``w``

    Raises:
        DimensionError: If the last axis of ``w`` differs from the grid size
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim not in (1, 2) or w.shape[-1] != grid.steps:
        raise DimensionError(f"Wiener path shape {w.shape} does not match {grid.steps} grid steps")
    batch = np.atleast_2d(w)
    dw = np.diff(batch, axis=1, prepend=0.0)
    dt = grid.dt

    y = np.empty_like(batch)
    current = np.zeros(batch.shape[0])
    for i in range(grid.steps):
        sigma = log_local_vol(current, params.nu, params.beta)
        current = current + (params.rate - 0.5 * sigma * sigma) * dt + sigma * dw[:, i]
        y[:, i] = current
    return y[0] if w.ndim == 1 else y


def euler_log_path(w: ArrayLike, params: HlvParams, grid: TimeGrid) -> np.ndarray:
    """Asset path S(t_i) = S0 * exp(Y(t_i)) in currency units."""
    return params.spot * np.exp(euler_log_paths(w, params, grid))
