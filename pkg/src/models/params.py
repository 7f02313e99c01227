"""
Pydantic models for model parameters, option contracts and estimator results.

This module defines the hyperbolic local volatility parameters, the option
specification, finite-difference shift sizes and the price / Greek reports.
"""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SequenceKind(str, Enum):
    """Source of uniform points."""
    MT = "mt"  # Mersenne Twister pseudo-random
    SOBOL = "sobol"


class Construction(str, Enum):
    """Wiener path construction."""
    INCREMENTAL = "incremental"
    BRIDGE = "bridge"


class OptionStyle(str, Enum):
    """Supported payoffs."""
    GEOMETRIC_ASIAN_CALL = "geometric-asian-call"
    EUROPEAN_CALL = "european-call"


class Quantity(str, Enum):
    """Quantities tracked by a convergence study."""
    PRICE = "price"
    DELTA = "delta"
    GAMMA = "gamma"
    VEGA_NU = "vega_nu"
    VEGA_BETA = "vega_beta"


class Method(str, Enum):
    """Sequence kind and path construction pair."""
    MC_INCREMENTAL = "mc+incremental"
    QMC_INCREMENTAL = "qmc+incremental"
    QMC_BRIDGE = "qmc+bridge"
    MC_BRIDGE = "mc+bridge"

    @property
    def sequence(self) -> SequenceKind:
        return SequenceKind.SOBOL if self.value.startswith("qmc") else SequenceKind.MT

    @property
    def construction(self) -> Construction:
        return Construction(self.value.split("+", 1)[1])


class HlvParams(BaseModel):
    """Parameters of the hyperbolic local volatility dynamics."""
    model_config = ConfigDict(frozen=True)

    nu: float = Field(default=0.3, gt=0, description="Volatility level per sqrt(year)")
    beta: float = Field(default=0.5, gt=0, le=1, description="Skew parameter in (0, 1]")
    rate: float = Field(default=0.03, description="Risk-free rate per year")
    spot: float = Field(default=100.0, gt=0, description="Initial spot")

    def bumped(self, **changes: float) -> "HlvParams":
        """Return a validated copy with some fields replaced."""
        return HlvParams.model_validate({**self.model_dump(), **changes})


class OptionSpec(BaseModel):
    """Option contract with fixings on the simulation grid t_i = i T / n."""
    model_config = ConfigDict(frozen=True)

    strike: float = Field(gt=0, description="Strike in currency units")
    maturity: float = Field(default=1.0, gt=0, description="Maturity in years")
    fixings: int = Field(default=256, ge=1, description="Equally spaced fixings (= Euler steps)")
    style: OptionStyle = OptionStyle.GEOMETRIC_ASIAN_CALL


class GreekShifts(BaseModel):
    """Finite-difference bump sizes."""
    model_config = ConfigDict(frozen=True)

    spot_shift: float = Field(gt=0, description="Absolute spot bump")
    nu_shift: float = Field(gt=0, description="Absolute bump of nu")
    beta_shift: float = Field(gt=0, description="Absolute bump of beta")

    @classmethod
    def relative(
        cls,
        params: HlvParams,
        spot_pct: float = 1.0,
        param_pct: float = 1.0,
    ) -> "GreekShifts":
        """Shifts sized as a percentage of the current spot, nu and beta."""
        return cls(
            spot_shift=params.spot * spot_pct / 100.0,
            nu_shift=params.nu * param_pct / 100.0,
            beta_shift=params.beta * param_pct / 100.0,
        )


class PriceEstimate(BaseModel):
    """Discounted Monte Carlo / quasi-Monte Carlo price."""
    value: float = Field(description="Discounted mean payoff")
    std_error: Optional[float] = Field(
        default=None,
        ge=0,
        description="Standard error of the mean (pseudo-random streams only)"
    )
    n_paths: int = Field(ge=1, description="Number of simulated paths")
    discount_factor: float = Field(description="exp(-rT) applied to the mean payoff")


class GreekReport(BaseModel):
    """Central finite-difference Greeks and the base price."""
    price: float
    delta: float
    gamma: float
    vega_nu: Optional[float] = Field(default=None, description="None when not requested")
    vega_beta: Optional[float] = Field(default=None, description="None when not requested")
    n_paths: int = Field(ge=1)

    @model_validator(mode="after")
    def check_finite(self) -> "GreekReport":
        for name in ("price", "delta", "gamma", "vega_nu", "vega_beta"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValueError(f"{name} is not finite")
        return self

    def value_of(self, quantity: Quantity | str) -> float:
        """Look up a quantity by name."""
        value = getattr(self, Quantity(quantity).value)
        if value is None:
            raise ValueError(f"{Quantity(quantity).value} was not computed")
        return float(value)
