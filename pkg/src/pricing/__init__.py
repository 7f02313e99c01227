"""
Payoffs, MC/QMC estimators, finite-difference Greeks and Black-Scholes utilities.
"""

from .black_scholes import (
    bs_european_call,
    bs_european_delta,
    bs_geometric_asian_closed_form,
    implied_vol,
)
from .engine import (
    geometric_average,
    asian_payoff,
    PathSimulator,
    run_chunked,
    mc_price,
    mc_price_many,
)
from .greeks import greeks, greeks_many
from .smile import SmilePoint, implied_vol_curve, DEFAULT_MONEYNESS

__all__ = [
    "bs_european_call",
    "bs_european_delta",
    "bs_geometric_asian_closed_form",
    "implied_vol",
    "geometric_average",
    "asian_payoff",
    "PathSimulator",
    "run_chunked",
    "mc_price",
    "mc_price_many",
    "greeks",
    "greeks_many",
    "SmilePoint",
    "implied_vol_curve",
    "DEFAULT_MONEYNESS",
]
