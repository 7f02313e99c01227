"""
Fast property checks behind ``hlv-qmc selftest``.

Each check returns a ``CheckResult``; a failing check never raises.
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel
from scipy.special import erf

from src.models.params import Construction, HlvParams, OptionSpec
from src.paths.construction import TimeGrid, construction_matrix
from src.paths.hlv import local_vol
from src.pricing.black_scholes import bs_geometric_asian_closed_form
from src.pricing.engine import mc_price
from src.sequences.direction_numbers import DirectionNumberTable
from src.sequences.normal_transform import uniforms_to_gaussians
from src.sequences.uniform_sources import SobolStream, sobol_point

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str


def dyadic_counts_exact(points: np.ndarray) -> bool:
    """True if every coordinate puts exactly N / 2^q points in each dyadic interval, 2^q <= N."""
    n = points.shape[0]
    q_max = int(math.log2(n))
    for q in range(1, q_max + 1):
        cells = np.floor(points * (1 << q)).astype(np.int64)
        for j in range(points.shape[1]):
            counts = np.bincount(cells[:, j], minlength=1 << q)
            if not np.all(counts == n >> q):
                return False
    return True


def _check_first_point(table: DirectionNumberTable) -> tuple[bool, str]:
    dim = min(16, table.max_dimension)
    point = sobol_point(table, 1, dim)
    return bool(np.all(point == 0.5)), f"index 1 in {dim} dimensions"


def _check_equidistribution(table: DirectionNumberTable) -> tuple[bool, str]:
    dim = min(16, table.max_dimension)
    n = 1 << 10
    points = SobolStream(table, dim, cursor=n).draw(n)
    return dyadic_counts_exact(points), f"indices [{n}, {2 * n}) in {dim} dimensions"


def _check_round_trip(table: DirectionNumberTable) -> tuple[bool, str]:
    u = np.concatenate([np.geomspace(1e-8, 0.5, 2000), 1.0 - np.geomspace(1e-8, 0.5, 2000)])
    z = uniforms_to_gaussians(u)
    phi = 0.5 * (1.0 + erf(z / math.sqrt(2.0)))
    err = float(np.max(np.abs(phi - u)))
    return err <= 1e-9, f"max |Phi(inv(u)) - u| = {err:.2e}"


def _check_bridge_variance(table: DirectionNumberTable) -> tuple[bool, str]:
    grid = TimeGrid(maturity=1.0, steps=256)
    worst = 0.0
    for construction in Construction:
        a = construction_matrix(grid, construction)
        worst = max(worst, float(np.max(np.abs(np.sum(a * a, axis=1) - grid.knots[1:]))))
    return worst <= 1e-12, f"max |sum of squared weights - t_i| = {worst:.2e}"


def _check_local_vol(table: DirectionNumberTable) -> tuple[bool, str]:
    betas = np.linspace(0.05, 1.0, 20)
    at_money = max(abs(local_vol(1.0, 0.3, b) - 0.3) for b in betas)
    s = np.linspace(0.1, 3.0, 50)
    black_scholes = float(np.max(np.abs(local_vol(s, 0.3, 1.0) - 0.3 * s)))
    worst = max(at_money, black_scholes)
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def _closed_form_check(workers: Optional[int]) -> Callable[[DirectionNumberTable], tuple[bool, str]]:
    def check(table: DirectionNumberTable) -> tuple[bool, str]:
        params = HlvParams(beta=1.0)
        spec = OptionSpec(strike=100.0, fixings=64)
        exact = bs_geometric_asian_closed_form(params, spec)
        estimate = mc_price(
            spec, params, SobolStream(table, spec.fixings), Construction.BRIDGE, 1 << 14, workers=workers
        )
        rel = abs(estimate.value - exact) / exact
        return rel <= 5e-3, f"QMC {estimate.value:.6f} vs closed form {exact:.6f} ({rel:.2e} relative)"

    return check


def run_checks(table: DirectionNumberTable, workers: Optional[int] = None) -> list[CheckResult]:
    """Run every check against ``table``."""
    checks = [
        ("sobol first point", _check_first_point),
        ("sobol dyadic equidistribution", _check_equidistribution),
        ("inverse normal round trip", _check_round_trip),
        ("bridge marginal variance", _check_bridge_variance),
        ("local vol identities", _check_local_vol),
        ("beta=1 closed form", _closed_form_check(workers)),
    ]
    results = []
    for name, check in checks:
        try:
            passed, detail = check(table)
        except Exception as e:
            logger.exception("Check %s raised", name)
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
