"""
Convergence studies: L independent runs per path count, a high-accuracy
reference, RMSE curves and fitted rates N^{-alpha}.

Run ``l`` of a Sobol method reads the disjoint index block
[1 + l B, (l + 1) B] with B = reference_paths, so every grid run is a
prefix of the matching reference block. Run ``l`` of a pseudo-random method
uses the MT19937 stream keyed by (seed, l).
"""

import logging
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import linregress

from src.errors import DomainError, InsufficientDataError
from src.models.config import get_settings
from src.models.experiment import (
    ConvergenceCell,
    ConvergencePoint,
    ConvergenceReport,
    ExperimentConfig,
    RateFit,
)
from src.models.params import Method, Quantity, SequenceKind
from src.pricing.engine import mc_price_many
from src.pricing.greeks import greeks_many
from src.sequences.direction_numbers import DirectionNumberTable, resolve_direction_numbers
from src.sequences.uniform_sources import MersenneTwisterStream, SobolStream, UniformStream

logger = logging.getLogger(__name__)

REFERENCE_METHOD = Method.QMC_BRIDGE
# independent blocks consumed per path when bumps do not share points
UNRECYCLED_DRAWS = 7

Estimates = dict[tuple[Quantity, float], float]


class StudyRunner:
    """Evaluates every (quantity, strike) of a config for one method, path count and run."""

    def __init__(
        self,
        config: ExperimentConfig,
        table: Optional[DirectionNumberTable] = None,
        *,
        chunk_size: Optional[int] = None,
        workers: Optional[int] = None,
    ):
        self.config = config
        self._table = table
        self.chunk_size = chunk_size
        self.workers = workers
        self.block_size = config.reference_paths * (1 if config.recycle else UNRECYCLED_DRAWS)

    @property
    def table(self) -> DirectionNumberTable:
        if self._table is None:
            self._table = resolve_direction_numbers(get_settings().direction_numbers)
        return self._table

    def stream(self, method: Method, run: int) -> UniformStream:
        """Stream of run ``run``; Sobol runs get disjoint blocks, MT runs per-run seeds."""
        dimension = self.config.fixings
        if method.sequence is SequenceKind.SOBOL:
            return SobolStream(self.table, dimension).partition(run, self.block_size)
        return MersenneTwisterStream(dimension, self.config.seed).partition(run, self.block_size)

    def estimate(self, method: Method, n_paths: int, run: int) -> Estimates:
        config = self.config
        if not config.quantities:
            return {}
        specs = config.specs
        stream = self.stream(method, run)
        if config.needs_greeks:
            reports = greeks_many(
                specs,
                config.params,
                stream,
                method.construction,
                n_paths,
                config.resolved_shifts(),
                quantities=config.quantities,
                recycle=config.recycle,
                chunk_size=self.chunk_size,
                workers=self.workers,
            )
            return {
                (q, spec.strike): report.value_of(q)
                for spec, report in zip(specs, reports)
                for q in config.quantities
            }
        prices = mc_price_many(
            specs,
            config.params,
            stream,
            method.construction,
            n_paths,
            chunk_size=self.chunk_size,
            workers=self.workers,
        )
        return {(Quantity.PRICE, spec.strike): p.value for spec, p in zip(specs, prices)}

    def replicate(self, method: Method, n_paths: int) -> list[Estimates]:
        """Estimates of runs 0..L-1."""
        return [self.estimate(method, n_paths, run) for run in range(self.config.runs)]

    def references(self) -> Estimates:
        """Average over L runs of reference_paths Sobol+bridge paths."""
        runs = self.replicate(REFERENCE_METHOD, self.config.reference_paths)
        return {key: float(np.mean([r[key] for r in runs])) for key in runs[0]} if runs else {}


def _check_cell(config: ExperimentConfig, quantity: Quantity, strike: float) -> None:
    if quantity not in config.quantities:
        raise ValueError(f"quantity {quantity.value} is not part of the experiment")
    if strike not in config.strikes:
        raise ValueError(f"strike {strike:g} is not part of the experiment")


def run_replications(
    config: ExperimentConfig,
    quantity: Quantity | str,
    strike: float,
    method: Method | str,
    n_paths: int,
    *,
    table: Optional[DirectionNumberTable] = None,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> list[float]:
    """
    L independent estimates Q_N^(1..L) of one quantity.

    Raises:
        StreamExhaustedError: If a run needs more points than its block holds
    """
    quantity = Quantity(quantity)
    _check_cell(config, quantity, strike)
    runner = StudyRunner(config, table, chunk_size=chunk_size, workers=workers)
    return [r[(quantity, strike)] for r in runner.replicate(Method(method), n_paths)]


def reference_value(
    config: ExperimentConfig,
    quantity: Quantity | str,
    strike: float,
    *,
    table: Optional[DirectionNumberTable] = None,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> float:
    """Reference Q_ref = (1/L) sum of L Sobol+bridge estimates with reference_paths paths each."""
    quantity = Quantity(quantity)
    _check_cell(config, quantity, strike)
    runner = StudyRunner(config, table, chunk_size=chunk_size, workers=workers)
    return runner.references()[(quantity, strike)]


def rmse(values: ArrayLike, reference: float) -> float:
    """
    Root mean square error ((1/L) sum (Q_ref - Q^(l))^2)^(1/2).

    Raises:
        DomainError: If values is empty
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise DomainError("RMSE of an empty list of estimates")
    return float(np.sqrt(np.mean(np.square(reference - arr))))


def fit_convergence_rate(points: Sequence[tuple[int, float]]) -> RateFit:
    """
    Least squares of ln(rmse) on ln(N); alpha is minus the slope.

    Points with zero RMSE are excluded and listed in ``RateFit.excluded``.

    Raises:
        DomainError: If an RMSE is negative
        InsufficientDataError: If fewer than 3 points remain
    """
    usable = []
    excluded = []
    for n, err in points:
        if err < 0:
            raise DomainError(f"RMSE must be non-negative, got {err} at N={n}")
        if err == 0:
            excluded.append(int(n))
        else:
            usable.append((n, err))
    if len(usable) < 3:
        raise InsufficientDataError(
            f"need at least 3 points with positive RMSE to fit a rate, got {len(usable)}"
        )
    log_n = np.log([float(n) for n, _ in usable])
    log_err = np.log([err for _, err in usable])
    fit = linregress(log_n, log_err)
    return RateFit(
        alpha=-float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue) ** 2,
        n_points=len(usable),
        excluded=excluded,
    )


def run_study(
    config: ExperimentConfig,
    *,
    table: Optional[DirectionNumberTable] = None,
    chunk_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> ConvergenceReport:
    """
    Run a full convergence study.

    Every estimate is keyed by (method, N, run) and reduced in a fixed order,
    so the report depends only on the config and the direction numbers.

    Args:
        config: Experiment definition
        table: Direction numbers (settings default)
        chunk_size: Paths per chunk
        workers: Evaluation threads

    Returns:
        Report with one cell per (quantity, strike, method)
    """
    runner = StudyRunner(config, table, chunk_size=chunk_size, workers=workers)
    if not config.quantities or not config.methods:
        logger.info("Nothing to estimate: no quantities or methods configured")
        return ConvergenceReport(config=config)

    logger.info(
        "Reference: %d runs x %d %s paths", config.runs, config.reference_paths, REFERENCE_METHOD.value
    )
    references = runner.references()

    curves: dict[tuple[Quantity, float, Method], list[ConvergencePoint]] = {}
    for method in config.methods:
        for n_paths in config.path_grid:
            logger.info("%s: %d runs x %d paths", method.value, config.runs, n_paths)
            runs = runner.replicate(method, n_paths)
            for key, ref in references.items():
                values = [r[key] for r in runs]
                curves.setdefault((*key, method), []).append(
                    ConvergencePoint(
                        n_paths=n_paths,
                        mean_estimate=float(np.mean(values)),
                        rmse=rmse(values, ref),
                        estimates=values,
                    )
                )

    cells = []
    for quantity in config.quantities:
        for strike in config.strikes:
            for method in config.methods:
                points = curves[(quantity, strike, method)]
                try:
                    fit = fit_convergence_rate([(p.n_paths, p.rmse) for p in points])
                except InsufficientDataError as e:
                    logger.warning("%s K=%g %s: %s", quantity.value, strike, method.value, e)
                    fit = None
                cells.append(
                    ConvergenceCell(
                        quantity=quantity,
                        strike=strike,
                        method=method,
                        reference_value=references[(quantity, strike)],
                        points=points,
                        fit=fit,
                    )
                )
    return ConvergenceReport(config=config, cells=cells)
