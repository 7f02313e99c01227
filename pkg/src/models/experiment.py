"""
Pydantic models for convergence studies.

``ExperimentConfig`` mirrors the JSON experiment file; the remaining models
hold the per-cell RMSE curves and fitted convergence rates.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .params import GreekShifts, HlvParams, Method, OptionSpec, OptionStyle, Quantity


def _default_grid() -> list[int]:
    return [2 ** p for p in range(7, 15)]


class ExperimentConfig(BaseModel):
    """A full convergence study: L runs per (quantity, strike, method, N) cell."""
    model_config = ConfigDict(extra="forbid")

    params: HlvParams = Field(default_factory=HlvParams, description="Model parameters")
    strikes: list[float] = Field(
        default_factory=lambda: [80.0, 100.0, 120.0],
        min_length=1,
        description="Strikes of the geometric-average Asian calls"
    )
    maturity: float = Field(default=1.0, gt=0, description="Maturity T in years")
    fixings: int = Field(default=256, ge=1, description="Fixings n (= Euler steps)")
    quantities: list[Quantity] = Field(
        default_factory=lambda: list(Quantity),
        description="Quantities estimated in every run"
    )
    methods: list[Method] = Field(
        default_factory=lambda: list(Method),
        description="Sequence / construction combinations"
    )
    path_grid: list[int] = Field(
        default_factory=_default_grid,
        min_length=1,
        description="Path counts N, strictly increasing"
    )
    runs: int = Field(default=10, ge=2, description="Independent runs L")
    reference_paths: int = Field(default=262144, description="Paths m per reference run")
    seed: int = Field(default=20240611, ge=0, description="Base seed for pseudo-random runs")
    shifts: Optional[GreekShifts] = Field(
        default=None,
        description="Absolute bumps; derived from the percentages below when omitted"
    )
    shift_spot_pct: float = Field(default=1.0, gt=0, description="Spot bump in % of S0")
    shift_param_pct: float = Field(default=1.0, gt=0, description="nu / beta bump in % of their value")
    recycle: bool = Field(default=True, description="Reuse uniform points across bumps")

    @field_validator("strikes")
    @classmethod
    def strikes_positive(cls, v: list[float]) -> list[float]:
        if any(k <= 0 for k in v):
            raise ValueError("strikes must be positive")
        if len(set(v)) != len(v):
            raise ValueError("strikes must be distinct")
        return v

    @field_validator("quantities", "methods")
    @classmethod
    def no_duplicates(cls, v: list) -> list:
        if len(set(v)) != len(v):
            raise ValueError("entries must be distinct")
        return v

    @field_validator("path_grid")
    @classmethod
    def grid_increasing(cls, v: list[int]) -> list[int]:
        if v[0] < 1:
            raise ValueError("path counts must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("path grid must be strictly increasing")
        return v

    @model_validator(mode="after")
    def reference_dominates_grid(self) -> "ExperimentConfig":
        if self.reference_paths <= self.path_grid[-1]:
            raise ValueError(
                f"reference_paths ({self.reference_paths}) must exceed the largest grid N "
                f"({self.path_grid[-1]})"
            )
        return self

    @property
    def specs(self) -> list[OptionSpec]:
        return [
            OptionSpec(
                strike=k,
                maturity=self.maturity,
                fixings=self.fixings,
                style=OptionStyle.GEOMETRIC_ASIAN_CALL,
            )
            for k in self.strikes
        ]

    def resolved_shifts(self) -> GreekShifts:
        return self.shifts or GreekShifts.relative(
            self.params, self.shift_spot_pct, self.shift_param_pct
        )

    @property
    def needs_greeks(self) -> bool:
        return any(q is not Quantity.PRICE for q in self.quantities)


class ConvergencePoint(BaseModel):
    """Estimates at one path count."""
    n_paths: int = Field(ge=1)
    mean_estimate: float = Field(description="Average of the L run estimates")
    rmse: float = Field(ge=0, description="Root mean square error against the reference")
    estimates: list[float] = Field(default_factory=list, description="Per-run estimates")


class RateFit(BaseModel):
    """Least-squares fit ln(rmse) = intercept - alpha ln(N)."""
    alpha: float
    intercept: float
    r_squared: float
    n_points: int = Field(ge=3)
    excluded: list[int] = Field(default_factory=list, description="N values dropped for zero RMSE")


class ConvergenceCell(BaseModel):
    """RMSE curve for one (quantity, strike, method)."""
    quantity: Quantity
    strike: float
    method: Method
    reference_value: float
    points: list[ConvergencePoint] = Field(default_factory=list)
    fit: Optional[RateFit] = None


class ConvergenceReport(BaseModel):
    """All cells of a convergence study."""
    config: ExperimentConfig
    cells: list[ConvergenceCell] = Field(default_factory=list)

    def cell(self, quantity: Quantity | str, strike: float, method: Method | str) -> ConvergenceCell:
        """Look up one cell; raises KeyError if absent."""
        key = (Quantity(quantity), float(strike), Method(method))
        for c in self.cells:
            if (c.quantity, c.strike, c.method) == key:
                return c
        raise KeyError(f"no cell for {key}")
