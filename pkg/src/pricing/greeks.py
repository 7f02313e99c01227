"""
Central finite-difference Greeks with path recycling.

With recycling, every bumped evaluation reuses the uniform points of the
base evaluation. Spot bumps reuse the base normalized paths verbatim (strike
K / (S0 +- h) on X, rescaled by S0 +- h); nu and beta bumps re-run the Euler
scheme on the same Wiener increments.

    Delta = (P(S0 + h) - P(S0 - h)) / 2h
    Gamma = (P(S0 + h) - 2 P(S0) + P(S0 - h)) / h^2
    Vega  = (P(p + e) - P(p - e)) / 2e,  p in {nu, beta}
"""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from src.errors import ShiftDomainError
from src.models.params import (
    Construction,
    GreekReport,
    GreekShifts,
    HlvParams,
    OptionSpec,
    Quantity,
)
from src.paths.construction import TimeGrid
from src.paths.hlv import euler_log_paths
from src.sequences.uniform_sources import UniformStream

from .engine import (
    PathSimulator,
    check_common_contract,
    check_stream_dimension,
    log_summary,
    run_chunked,
)

logger = logging.getLogger(__name__)

# Rows of the per-chunk payoff sums
BASE, SPOT_UP, SPOT_DOWN, NU_UP, NU_DOWN, BETA_UP, BETA_DOWN = range(7)


def _bumped_params(
    params: HlvParams,
    shifts: GreekShifts,
    with_nu: bool,
    with_beta: bool,
) -> dict[int, HlvParams]:
    """Parameter sets per evaluation row, after checking every bump stays in its domain."""
    if params.spot - shifts.spot_shift <= 0:
        raise ShiftDomainError(
            f"spot shift {shifts.spot_shift:g} makes the spot non-positive; use a smaller spot shift"
        )
    rows = {BASE: params}
    if with_nu:
        if params.nu - shifts.nu_shift <= 0:
            raise ShiftDomainError(
                f"nu shift {shifts.nu_shift:g} makes nu non-positive; use a smaller parameter shift"
            )
        rows[NU_UP] = params.bumped(nu=params.nu + shifts.nu_shift)
        rows[NU_DOWN] = params.bumped(nu=params.nu - shifts.nu_shift)
    if with_beta:
        up, down = params.beta + shifts.beta_shift, params.beta - shifts.beta_shift
        if up > 1.0 or down <= 0.0:
            raise ShiftDomainError(
                f"beta shift {shifts.beta_shift:g} moves beta={params.beta:g} outside (0, 1]; "
                f"use a parameter shift below {min(1.0 - params.beta, params.beta):g}"
            )
        rows[BETA_UP] = params.bumped(beta=up)
        rows[BETA_DOWN] = params.bumped(beta=down)
    return rows


def greeks_many(
    specs: Sequence[OptionSpec],
    params: HlvParams,
    stream: UniformStream,
    construction: Construction | str,
    n_paths: int,
    shifts: Optional[GreekShifts] = None,
    *,
    quantities: Optional[Iterable[Quantity | str]] = None,
    recycle: bool = True,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> list[GreekReport]:
    """
    Price, Delta, Gamma and the requested Vegas for several strikes of one contract.

    Args:
        specs: Options sharing maturity, fixings and style
        params: Model parameters
        stream: Uniform source of dimension = fixings
        construction: ``incremental`` or ``bridge``
        n_paths: Paths per evaluation
        shifts: Bump sizes (default 1% of spot, nu and beta)
        quantities: Restrict the Vegas computed; None computes both
        recycle: Reuse the same points for every bump; otherwise each
            evaluation consumes its own block of n_paths points
        chunk_size: Paths per chunk
        workers: Evaluation threads

    Returns:
        One report per spec; Vegas not requested are None

    Raises:
        ShiftDomainError: If a bump leaves the parameter domain
    """
    if not specs:
        return []
    wanted = {Quantity(q) for q in quantities} if quantities is not None else set(Quantity)
    shifts = shifts or GreekShifts.relative(params)
    rows = _bumped_params(params, shifts, Quantity.VEGA_NU in wanted, Quantity.VEGA_BETA in wanted)

    maturity, steps, style = check_common_contract(specs)
    check_stream_dimension(stream, steps)
    simulator = PathSimulator(TimeGrid(maturity=maturity, steps=steps), construction)
    strikes = np.array([spec.strike for spec in specs])
    spots = {
        BASE: params.spot,
        SPOT_UP: params.spot + shifts.spot_shift,
        SPOT_DOWN: params.spot - shifts.spot_shift,
    }
    # evaluation order; spot bumps share the base simulation when recycling
    passes = [BASE] + ([] if recycle else [SPOT_UP, SPOT_DOWN]) + [r for r in rows if r != BASE]

    def payoff_sum(summary: np.ndarray, spot: float) -> np.ndarray:
        x = np.exp(summary)[:, np.newaxis]
        return spot * np.maximum(x - strikes[np.newaxis, :] / spot, 0.0).sum(axis=0)

    def evaluate(uniforms: np.ndarray) -> np.ndarray:
        blocks = [uniforms] * len(passes) if recycle else np.split(uniforms, len(passes))
        sums = np.zeros((7, len(strikes)))
        wiener = simulator.wiener(blocks[0]) if recycle else None
        for row, block in zip(passes, blocks):
            w = wiener if recycle else simulator.wiener(block)
            row_params = rows.get(row, params)
            summary = log_summary(euler_log_paths(w, row_params, simulator.grid), style)
            if row == BASE and recycle:
                for spot_row in (BASE, SPOT_UP, SPOT_DOWN):
                    sums[spot_row] = payoff_sum(summary, spots[spot_row])
            else:
                sums[row] = payoff_sum(summary, spots.get(row, params.spot))
        return sums

    sums = run_chunked(
        stream,
        n_paths,
        evaluate,
        draws_per_path=1 if recycle else len(passes),
        chunk_size=chunk_size,
        workers=workers,
    )
    prices = math.exp(-params.rate * maturity) * sums / n_paths

    h = shifts.spot_shift
    e_nu = shifts.nu_shift
    e_beta = shifts.beta_shift
    reports = []
    for j in range(len(specs)):
        p = prices[:, j]
        reports.append(
            GreekReport(
                price=p[BASE],
                delta=(p[SPOT_UP] - p[SPOT_DOWN]) / (2.0 * h),
                gamma=(p[SPOT_UP] - 2.0 * p[BASE] + p[SPOT_DOWN]) / (h * h),
                vega_nu=(p[NU_UP] - p[NU_DOWN]) / (2.0 * e_nu) if NU_UP in rows else None,
                vega_beta=(p[BETA_UP] - p[BETA_DOWN]) / (2.0 * e_beta) if BETA_UP in rows else None,
                n_paths=n_paths,
            )
        )
    logger.debug(
        "Greeks for %d strike(s): %d evaluations on %d paths (recycle=%s)",
        len(specs), len(passes), n_paths, recycle,
    )
    return reports


def greeks(
    spec: OptionSpec,
    params: HlvParams,
    stream: UniformStream,
    construction: Construction | str,
    n_paths: int,
    shifts: Optional[GreekShifts] = None,
    **kwargs,
) -> GreekReport:
    """Finite-difference Greeks of a single option; see ``greeks_many``."""
    return greeks_many([spec], params, stream, construction, n_paths, shifts, **kwargs)[0]
