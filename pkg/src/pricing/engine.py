"""
Monte Carlo / quasi-Monte Carlo estimator for geometric-average Asian and
European calls under the hyperbolic local volatility model.

Paths are processed in chunks. Uniform points are always drawn on the
calling thread, in stream order; chunk evaluation may run on a thread pool
and chunk partial sums are reduced in chunk order, so results do not depend
on the number of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from src.errors import DimensionError, DomainError, StreamExhaustedError
from src.models.config import get_settings
from src.models.params import (
    Construction,
    HlvParams,
    OptionSpec,
    OptionStyle,
    PriceEstimate,
    SequenceKind,
)
from src.paths.construction import BridgePlan, TimeGrid, build_bridge_plan, build_paths
from src.paths.hlv import euler_log_paths
from src.sequences.normal_transform import uniforms_to_gaussians
from src.sequences.uniform_sources import UniformStream

logger = logging.getLogger(__name__)


# ==================== Payoffs ====================

def geometric_average(path: ArrayLike) -> np.ndarray | float:
    """
    Geometric mean of the fixings, exp(mean(log S_i)), along the last axis.

    Raises:
        DomainError: If the path is empty or has non-positive values
    """
    values = np.asarray(path, dtype=np.float64)
    if values.ndim == 0 or values.shape[-1] == 0:
        raise DomainError("geometric average of an empty path")
    if np.any(values <= 0.0):
        raise DomainError("geometric average needs strictly positive prices")
    avg = np.exp(np.mean(np.log(values), axis=-1))
    return float(avg) if avg.ndim == 0 else avg


def asian_payoff(path: ArrayLike, strike: float) -> np.ndarray | float:
    """max(S_bar - K, 0)."""
    payoff = np.maximum(np.asarray(geometric_average(path)) - strike, 0.0)
    return float(payoff) if payoff.ndim == 0 else payoff


# ==================== Path batches ====================

class PathSimulator:
    """Turns uniform points into log normalized spot paths on a fixed grid."""

    def __init__(self, grid: TimeGrid, construction: Construction | str):
        self.grid = grid
        self.construction = Construction(construction)
        self.plan: Optional[BridgePlan] = (
            build_bridge_plan(grid.steps, grid) if self.construction is Construction.BRIDGE else None
        )

    def wiener(self, uniforms: np.ndarray) -> np.ndarray:
        z = uniforms_to_gaussians(uniforms)
        return build_paths(z, self.grid, self.construction, self.plan)

    def log_paths(self, uniforms: np.ndarray, params: HlvParams) -> np.ndarray:
        return euler_log_paths(self.wiener(uniforms), params, self.grid)


def log_summary(log_paths: np.ndarray, style: OptionStyle) -> np.ndarray:
    """ln(S_bar / S0) for Asian calls or ln(S(T) / S0) for European calls, per path."""
    if style is OptionStyle.EUROPEAN_CALL:
        return log_paths[:, -1]
    return np.mean(log_paths, axis=1)


def payoff_moments(summary: np.ndarray, spot: float, strikes: np.ndarray) -> np.ndarray:
    """
    Sum and sum of squares of undiscounted call payoffs.

    Returns:
        Array of shape (2, len(strikes))
    """
    payoff = spot * np.maximum(np.exp(summary)[:, np.newaxis] - strikes[np.newaxis, :] / spot, 0.0)
    return np.stack([payoff.sum(axis=0), np.square(payoff).sum(axis=0)])


# ==================== Chunked evaluation ====================

def split_chunks(n_paths: int, chunk_size: int) -> list[int]:
    """Chunk sizes covering n_paths; all full except possibly the last."""
    return [min(chunk_size, n_paths - start) for start in range(0, n_paths, chunk_size)]


def run_chunked(
    stream: UniformStream,
    n_paths: int,
    evaluate: Callable[[np.ndarray], np.ndarray],
    *,
    draws_per_path: int = 1,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> np.ndarray:
    """
    Draw ``n_paths * draws_per_path`` points chunk by chunk and sum ``evaluate`` over chunks.

    Args:
        stream: Uniform source, consumed in order on this thread
        n_paths: Number of paths
        evaluate: Maps a (chunk * draws_per_path, d) block of uniforms to partial sums
        draws_per_path: Points consumed per path
        chunk_size: Paths per chunk (settings default)
        workers: Evaluation threads (settings default)

    Returns:
        Sum of the partial sums, accumulated in chunk order

    Raises:
        StreamExhaustedError: If the stream block cannot supply all points
    """
    if n_paths < 1:
        raise ValueError(f"number of paths must be positive, got {n_paths}")
    settings = get_settings()
    chunk_size = chunk_size or settings.chunk_size
    workers = workers or settings.effective_threads

    needed = n_paths * draws_per_path
    if stream.remaining is not None and stream.remaining < needed:
        raise StreamExhaustedError(
            f"stream block has {stream.remaining} points left, {needed} required"
        )

    sizes = split_chunks(n_paths, chunk_size)
    total: Optional[np.ndarray] = None
    if workers <= 1 or len(sizes) == 1:
        for size in sizes:
            part = evaluate(stream.draw(size * draws_per_path))
            total = part if total is None else total + part
        return total

    window = 2 * workers
    with ThreadPoolExecutor(max_workers=workers) as executor:
        for offset in range(0, len(sizes), window):
            blocks = [stream.draw(size * draws_per_path) for size in sizes[offset:offset + window]]
            for part in executor.map(evaluate, blocks):
                total = part if total is None else total + part
    return total


def check_common_contract(specs: Sequence[OptionSpec]) -> tuple[float, int, OptionStyle]:
    """Strikes may differ; maturity, fixings and style must be shared."""
    first = specs[0]
    for spec in specs[1:]:
        if (spec.maturity, spec.fixings, spec.style) != (first.maturity, first.fixings, first.style):
            raise ValueError("options priced together must share maturity, fixings and style")
    return first.maturity, first.fixings, first.style


def check_stream_dimension(stream: UniformStream, steps: int) -> None:
    if stream.dimension != steps:
        raise DimensionError(f"stream dimension {stream.dimension} != number of fixings {steps}")


def _to_estimate(
    moments: np.ndarray,
    n_paths: int,
    discount: float,
    with_error: bool,
) -> PriceEstimate:
    total, total_sq = float(moments[0]), float(moments[1])
    mean = total / n_paths
    std_error = None
    if with_error and n_paths > 1:
        variance = max(total_sq / n_paths - mean * mean, 0.0) * n_paths / (n_paths - 1)
        std_error = discount * math.sqrt(variance / n_paths)
    return PriceEstimate(
        value=discount * mean,
        std_error=std_error,
        n_paths=n_paths,
        discount_factor=discount,
    )


# ==================== Estimators ====================

def mc_price_many(
    specs: Sequence[OptionSpec],
    params: HlvParams,
    stream: UniformStream,
    construction: Construction | str,
    n_paths: int,
    *,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> list[PriceEstimate]:
    """
    Price several strikes of one contract on the same simulated paths.

    Args:
        specs: Options sharing maturity, fixings and style
        params: Model parameters
        stream: Uniform source of dimension = fixings; advances by n_paths points
        construction: ``incremental`` or ``bridge``
        n_paths: Number of paths N

    Returns:
        One estimate per spec, in order
    """
    if not specs:
        return []
    maturity, steps, style = check_common_contract(specs)
    check_stream_dimension(stream, steps)
    simulator = PathSimulator(TimeGrid(maturity=maturity, steps=steps), construction)
    strikes = np.array([spec.strike for spec in specs])

    def evaluate(uniforms: np.ndarray) -> np.ndarray:
        summary = log_summary(simulator.log_paths(uniforms, params), style)
        return payoff_moments(summary, params.spot, strikes)

    moments = run_chunked(stream, n_paths, evaluate, chunk_size=chunk_size, workers=workers)
    discount = math.exp(-params.rate * maturity)
    with_error = stream.kind is SequenceKind.MT
    logger.debug(
        "Priced %d strike(s) on %d %s+%s paths", len(specs), n_paths, stream.kind.value,
        simulator.construction.value,
    )
    return [_to_estimate(moments[:, j], n_paths, discount, with_error) for j in range(len(specs))]


def mc_price(
    spec: OptionSpec,
    params: HlvParams,
    stream: UniformStream,
    construction: Construction | str,
    n_paths: int,
    *,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> PriceEstimate:
    """
    Discounted mean payoff e^{-rT} (1/N) sum P_A over N paths.

    The standard error is reported for pseudo-random streams only.

    Raises:
        DimensionError: If the stream dimension differs from the number of fixings
        StreamExhaustedError: If the stream block is too short
    """
    return mc_price_many(
        [spec], params, stream, construction, n_paths, chunk_size=chunk_size, workers=workers
    )[0]
