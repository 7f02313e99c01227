"""
Black-Scholes utilities.

- European call value and delta
- Closed-form geometric-average Asian call under geometric Brownian motion,
  the exact answer of the local volatility model at beta = 1
- Implied volatility by bracketed root finding
"""

import math

from scipy.optimize import brentq
from scipy.stats import norm

from src.errors import DomainError, NoSolutionError
from src.models.params import HlvParams, OptionSpec, OptionStyle

IMPLIED_VOL_BRACKET = (1e-6, 5.0)


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def _d1_d2(spot: float, strike: float, rate: float, sigma: float, maturity: float) -> tuple[float, float]:
    sd = sigma * math.sqrt(maturity)
    d1 = (math.log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / sd
    return d1, d1 - sd


def bs_european_call(spot: float, strike: float, rate: float, sigma: float, maturity: float) -> float:
    """
    Black-Scholes value of a European call.

    Raises:
        DomainError: If sigma, spot, strike or maturity is not positive
    """
    _check_positive(sigma=sigma, spot=spot, strike=strike, maturity=maturity)
    d1, d2 = _d1_d2(spot, strike, rate, sigma, maturity)
    return float(spot * norm.cdf(d1) - strike * math.exp(-rate * maturity) * norm.cdf(d2))


def bs_european_delta(spot: float, strike: float, rate: float, sigma: float, maturity: float) -> float:
    """dC/dS0 = Phi(d1)."""
    _check_positive(sigma=sigma, spot=spot, strike=strike, maturity=maturity)
    d1, _ = _d1_d2(spot, strike, rate, sigma, maturity)
    return float(norm.cdf(d1))


def bs_geometric_asian_closed_form(params: HlvParams, spec: OptionSpec) -> float:
    """
    Geometric-average Asian call with fixings t_i = i T / n under GBM.

    ln S_bar is Gaussian with
        mean = ln S0 + (r - nu^2 / 2) T (n + 1) / (2n)
        var  = nu^2 T (n + 1)(2n + 1) / (6 n^2)

    Args:
        params: Model parameters, beta must equal 1
        spec: Geometric-average Asian call

    Returns:
        Discounted price

    Raises:
        DomainError: If beta != 1 or the option is not a geometric-average Asian
    """
    if params.beta != 1.0:
        raise DomainError(f"closed form requires beta = 1, got {params.beta}")
    if spec.style is not OptionStyle.GEOMETRIC_ASIAN_CALL:
        raise DomainError(f"closed form covers geometric-asian-call only, got {spec.style.value}")

    n = spec.fixings
    t = spec.maturity
    nu = params.nu
    discount = math.exp(-params.rate * t)
    mean = math.log(params.spot) + (params.rate - 0.5 * nu * nu) * t * (n + 1) / (2 * n)
    var = nu * nu * t * (n + 1) * (2 * n + 1) / (6 * n * n)
    if var == 0.0:
        return discount * max(math.exp(mean) - spec.strike, 0.0)

    sd = math.sqrt(var)
    d1 = (mean - math.log(spec.strike) + var) / sd
    d2 = d1 - sd
    return float(discount * (math.exp(mean + 0.5 * var) * norm.cdf(d1) - spec.strike * norm.cdf(d2)))


def implied_vol(price: float, spot: float, strike: float, rate: float, maturity: float) -> float:
    """
    Black-Scholes implied volatility of a European call price.

    Brent's method on the bracket [1e-6, 5] to machine precision.

    Raises:
        NoSolutionError: If the price lies outside the no-arbitrage band
            (max(S0 - K e^{-rT}, 0), S0) or needs a volatility outside the bracket
    """
    _check_positive(spot=spot, strike=strike, maturity=maturity)
    lower = max(spot - strike * math.exp(-rate * maturity), 0.0)
    if not lower < price < spot:
        raise NoSolutionError(
            f"price {price:.10g} outside no-arbitrage band ({lower:.10g}, {spot:.10g}) for strike {strike:g}"
        )

    def objective(sigma: float) -> float:
        return bs_european_call(spot, strike, rate, sigma, maturity) - price

    low, high = IMPLIED_VOL_BRACKET
    f_low, f_high = objective(low), objective(high)
    if f_low > 0 or f_high < 0:
        raise NoSolutionError(
            f"implied volatility for strike {strike:g} lies outside [{low:g}, {high:g}]"
        )
    if f_low == 0:
        return low
    if f_high == 0:
        return high
    return float(brentq(objective, low, high, xtol=1e-15, maxiter=500))
