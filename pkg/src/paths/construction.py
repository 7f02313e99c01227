"""
Discretized Wiener paths on an equally spaced grid.

Two constructions map a Gaussian vector z of length n to W(t_1..t_n):
- incremental: W(t_i) = W(t_{i-1}) + sqrt(dt) z_i
- Brownian bridge: z_1 sets the terminal value, later coordinates fill
  midpoints by breadth-first bisection, so leading coordinates carry most
  of the path variance

Gaussian input may be a single vector of shape (n,) or a batch (paths, n).
"""

import math
from collections import deque
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from src.errors import DimensionError
from src.models.params import Construction


class TimeGrid(BaseModel):
    """Knots t_i = i T / n, i = 0..n."""
    model_config = ConfigDict(frozen=True)

    maturity: float = Field(gt=0, description="T in years")
    steps: int = Field(ge=1, description="n")

    @property
    def dt(self) -> float:
        return self.maturity / self.steps

    @property
    def knots(self) -> np.ndarray:
        knots = np.arange(self.steps + 1, dtype=np.float64) * self.dt
        knots[-1] = self.maturity
        return knots


class BridgeStep(BaseModel):
    """One conditional draw W(t_i) = (1 - g) W(t_l) + g W(t_m) + stddev z."""
    model_config = ConfigDict(frozen=True)

    target: int = Field(ge=1)
    left: int = Field(ge=0)
    right: Optional[int] = Field(default=None, description="None for the terminal point")
    weight: float = Field(ge=0, le=1)
    stddev: float = Field(gt=0)


class BridgePlan(BaseModel):
    """Ordered bridge steps; the k-th Gaussian coordinate drives the k-th step."""
    model_config = ConfigDict(frozen=True)

    steps: tuple[BridgeStep, ...]
    n: int = Field(ge=1)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(targets, lefts, rights, weights, stddevs); the terminal right index maps to 0."""
        targets = np.array([s.target for s in self.steps], dtype=np.intp)
        lefts = np.array([s.left for s in self.steps], dtype=np.intp)
        rights = np.array([s.right or 0 for s in self.steps], dtype=np.intp)
        weights = np.array([s.weight for s in self.steps])
        stddevs = np.array([s.stddev for s in self.steps])
        return targets, lefts, rights, weights, stddevs


def _as_batch(z: ArrayLike, steps: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=np.float64)
    single = arr.ndim == 1
    batch = arr[np.newaxis, :] if single else arr
    if batch.ndim != 2 or batch.shape[1] != steps:
        raise DimensionError(f"expected Gaussian vectors of length {steps}, got shape {arr.shape}")
    return batch, single


def incremental_path(z: ArrayLike, grid: TimeGrid) -> np.ndarray:
    """Cumulative sum of sqrt(dt)-scaled normals; coordinate i drives step i."""
    batch, single = _as_batch(z, grid.steps)
    w = np.cumsum(math.sqrt(grid.dt) * batch, axis=1)
    return w[0] if single else w


def build_bridge_plan(n: int, grid: TimeGrid) -> BridgePlan:
    """
    Brownian-bridge fill order by breadth-first bisection.

    The first step is the terminal point with stddev sqrt(T); each interval
    (l, m) with m - l >= 2 is split at floor((l + m) / 2). For n = 2^p this is
    the classical dyadic order.
    """
    if n != grid.steps:
        raise DimensionError(f"plan size {n} does not match grid steps {grid.steps}")
    steps = [BridgeStep(target=n, left=0, right=None, weight=0.0, stddev=math.sqrt(grid.maturity))]
    pending = deque([(0, n)])
    while pending:
        left, right = pending.popleft()
        if right - left < 2:
            continue
        mid = (left + right) // 2
        gamma = (mid - left) / (right - left)
        stddev = math.sqrt(gamma * (1.0 - gamma) * (right - left) * grid.dt)
        steps.append(BridgeStep(target=mid, left=left, right=right, weight=gamma, stddev=stddev))
        pending.append((left, mid))
        pending.append((mid, right))
    return BridgePlan(steps=tuple(steps), n=n)


def bridge_path(z: ArrayLike, plan: BridgePlan, grid: TimeGrid) -> np.ndarray:
    """Generalized Brownian-bridge construction; W(t_0) = 0 anchors the left end."""
    if plan.n != grid.steps:
        raise DimensionError(f"plan built for n={plan.n}, grid has {grid.steps} steps")
    batch, single = _as_batch(z, grid.steps)
    w = np.zeros((batch.shape[0], grid.steps + 1))
    targets, lefts, rights, weights, stddevs = plan.arrays
    for k in range(plan.n):
        g = weights[k]
        w[:, targets[k]] = (
            (1.0 - g) * w[:, lefts[k]] + g * w[:, rights[k]] + stddevs[k] * batch[:, k]
        )
    return w[0, 1:] if single else w[:, 1:]


def build_paths(
    z: ArrayLike,
    grid: TimeGrid,
    construction: Construction | str,
    plan: Optional[BridgePlan] = None,
) -> np.ndarray:
    """Dispatch to the requested construction."""
    if Construction(construction) is Construction.BRIDGE:
        return bridge_path(z, plan or build_bridge_plan(grid.steps, grid), grid)
    return incremental_path(z, grid)


def construction_matrix(
    grid: TimeGrid,
    construction: Construction | str,
    plan: Optional[BridgePlan] = None,
) -> np.ndarray:
    """Matrix A with W = A z (both constructions are linear in z)."""
    return build_paths(np.eye(grid.steps), grid, construction, plan).T
