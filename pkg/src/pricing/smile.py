"""
Implied volatility curves of the hyperbolic local volatility model.

European calls are priced by simulation on the Asian engine (terminal value
only) and inverted with the Black-Scholes formula, one strike at a time.
"""

import logging
import math
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from src.errors import DomainError, NoSolutionError
from src.models.config import get_settings
from src.models.params import Construction, HlvParams, OptionSpec, OptionStyle
from src.sequences.direction_numbers import DirectionNumberTable, resolve_direction_numbers
from src.sequences.uniform_sources import SobolStream, UniformStream

from .black_scholes import implied_vol
from .engine import mc_price_many

logger = logging.getLogger(__name__)

MIN_SMILE_PATHS = 1 << 12
DEFAULT_MONEYNESS = (0.5, 0.75, 1.0, 1.25, 1.5)


class SmilePoint(BaseModel):
    """One strike of an implied volatility curve; implied_vol is NaN when inversion fails."""
    strike: float = Field(gt=0)
    price: float
    implied_vol: float


def implied_vol_curve(
    params: HlvParams,
    strikes: Sequence[float],
    maturity: float,
    n_paths: int,
    construction: Construction | str = Construction.BRIDGE,
    *,
    steps: int = 256,
    stream: Optional[UniformStream] = None,
    table: Optional[DirectionNumberTable] = None,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> list[SmilePoint]:
    """
    Black-Scholes implied volatilities of simulated European call prices.

    Args:
        params: Model parameters
        strikes: Strikes in currency units
        maturity: Option maturity in years
        n_paths: Paths N (at least 4096)
        construction: Wiener path construction
        steps: Euler steps
        stream: Uniform source (defaults to a fresh Sobol stream)
        table: Direction numbers for the default stream

    Returns:
        One point per strike, in order

    Raises:
        DomainError: If fewer than 4096 paths are requested
    """
    if n_paths < MIN_SMILE_PATHS:
        raise DomainError(f"implied volatility curves need at least {MIN_SMILE_PATHS} paths, got {n_paths}")
    if not strikes:
        return []
    if stream is None:
        stream = SobolStream(table or resolve_direction_numbers(get_settings().direction_numbers), steps)

    specs = [
        OptionSpec(strike=k, maturity=maturity, fixings=steps, style=OptionStyle.EUROPEAN_CALL)
        for k in strikes
    ]
    estimates = mc_price_many(
        specs, params, stream, construction, n_paths, chunk_size=chunk_size, workers=workers
    )

    curve = []
    for spec, estimate in zip(specs, estimates):
        try:
            vol = implied_vol(estimate.value, params.spot, spec.strike, params.rate, maturity)
        except NoSolutionError as e:
            logger.warning("No implied volatility for strike %g: %s", spec.strike, e)
            vol = math.nan
        curve.append(SmilePoint(strike=spec.strike, price=estimate.value, implied_vol=vol))
    return curve
