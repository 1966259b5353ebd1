"""Closed-loop exploration runs: suggest, tap, ingest, record.

A run is a pure function of (config, scene): the seed fully determines the
initial taps and any random-strategy draws, so traces reproduce bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .env import Scene, TapResult
from .gp import KernelParams
from .metrics import effective_tap_improvement
from .surface import (CandidateGrid, ExplorationState, GridExhaustedError,
                      TapObservation, DEFAULT_SURFACE_KERNEL,
                      DEFAULT_WEIGHT_KERNEL)

__all__ = [
    "ComparisonRow",
    "MapSnapshot",
    "RNG_KIND",
    "RunConfig",
    "RunTrace",
    "Strategy",
    "TapRecord",
    "choose_index",
    "compare_strategies",
    "initial_tap_indices",
    "run",
]

# numpy's default_rng; recorded in traces so reproducibility claims name
# the generator they depend on.
RNG_KIND = "numpy-pcg64"


class Strategy(str, Enum):
    """Tap-selection policy for the steps after the initial random taps."""

    WEIGHTED = "weighted"          # argmax of uncertainty * weight
    UNCERTAINTY = "uncertainty"    # argmax of uncertainty alone
    RANDOM = "random"              # uniform over untapped grid points
    GRID = "grid"                  # untapped grid points in row-major order


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    budget: int = 17
    n_initial_random: int = 3
    grid_resolution: int = 47
    strategy: Strategy = Strategy.WEIGHTED
    surface_kernel: KernelParams = DEFAULT_SURFACE_KERNEL
    weight_kernel: KernelParams = DEFAULT_WEIGHT_KERNEL
    include_desk_taps: bool = True

    def validate(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not 0 <= self.n_initial_random <= self.budget:
            raise ValueError("n_initial_random must lie in [0, budget]")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be at least 2")
        if self.n_initial_random > self.grid_resolution ** 2:
            raise ValueError("n_initial_random exceeds the number of grid points")


@dataclass(frozen=True)
class TapRecord:
    """One executed tap within a run."""

    iteration: int                  # 1-based
    strategy: str                   # "initial" or the step strategy
    grid_index: int
    position: tuple[float, float]   # normalized
    result: TapResult
    cumulative_on_surface: int


@dataclass(frozen=True, eq=False)
class MapSnapshot:
    """Grid fields captured right after the tap of one iteration."""

    iteration: int
    height: np.ndarray
    uncertainty: np.ndarray
    weight: np.ndarray
    exploration: np.ndarray


@dataclass(eq=False)
class RunTrace:
    """Ordered record of one experiment, plus the final belief state."""

    config: RunConfig
    scene_fingerprint: str
    rng_kind: str
    records: list[TapRecord]
    snapshots: list[MapSnapshot]
    final_state: ExplorationState
    exhausted_early: bool = False

    @property
    def n_on_surface(self) -> int:
        return sum(1 for r in self.records if r.result.on_surface)


def initial_tap_indices(rng: np.random.Generator, grid: CandidateGrid,
                        n: int) -> np.ndarray:
    """Uniform without-replacement draw of ``n`` grid indices."""
    if n == 0:
        return np.zeros(0, dtype=int)
    return rng.choice(len(grid), size=n, replace=False)


def choose_index(state: ExplorationState, strategy: Strategy,
                 rng: np.random.Generator) -> int:
    """Next grid index under ``strategy``; raises GridExhaustedError when
    no untapped point remains."""
    if strategy is Strategy.WEIGHTED:
        return state.suggest_next("exploration")
    if strategy is Strategy.UNCERTAINTY:
        return state.suggest_next("uncertainty")
    untapped = state.untapped_indices()
    if untapped.size == 0:
        raise GridExhaustedError("every grid point has been tapped")
    if strategy is Strategy.RANDOM:
        return int(untapped[rng.integers(untapped.size)])
    return int(untapped[0])  # Strategy.GRID


def run(config: RunConfig, scene: Scene,
        snapshot_every: int | None = None) -> RunTrace:
    """Execute one full exploration run.

    Initial random taps go through the same ingest path as strategy steps,
    so they update both models. With ``snapshot_every=k`` the grid fields
    are captured after every k-th tap. If the grid runs out before the
    budget is spent the run stops early and the trace says so.
    """
    config.validate()
    grid = CandidateGrid(config.grid_resolution)
    rng = np.random.default_rng(config.seed)
    state = ExplorationState.empty(grid, config.surface_kernel,
                                   config.weight_kernel,
                                   config.include_desk_taps)
    planned = initial_tap_indices(rng, grid, config.n_initial_random)
    records: list[TapRecord] = []
    snapshots: list[MapSnapshot] = []
    exhausted = False
    n_on = 0
    for iteration in range(1, config.budget + 1):
        if iteration <= config.n_initial_random:
            idx = int(planned[iteration - 1])
            label = "initial"
        else:
            try:
                idx = choose_index(state, config.strategy, rng)
            except GridExhaustedError:
                exhausted = True
                break
            label = config.strategy.value
        position = (float(grid.points[idx, 0]), float(grid.points[idx, 1]))
        result = scene.tap(position, rng)
        state = state.ingest(TapObservation(position, result.height,
                                            result.on_surface))
        n_on += int(result.on_surface)
        records.append(TapRecord(iteration, label, idx, position, result, n_on))
        if snapshot_every and iteration % snapshot_every == 0:
            maps = state.acquisition_maps()
            snapshots.append(MapSnapshot(iteration, state.height_map(),
                                         maps.uncertainty, maps.weight,
                                         maps.exploration))
    return RunTrace(config, scene.fingerprint(), RNG_KIND, records, snapshots,
                    state, exhausted)


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    on_surface_weighted: int
    on_surface_uncertainty: int
    improvement: float


def compare_strategies(base: RunConfig, scene: Scene,
                       seeds: Sequence[int]) -> list[ComparisonRow]:
    """Paired-seed comparison of the weighted and uncertainty-only arms.

    Both arms of a pair share the seed, hence identical initial taps.
    """
    rows = []
    for seed in seeds:
        weighted = run(replace(base, seed=int(seed), strategy=Strategy.WEIGHTED),
                       scene)
        uncertainty = run(replace(base, seed=int(seed),
                                  strategy=Strategy.UNCERTAINTY), scene)
        rows.append(ComparisonRow(
            seed=int(seed),
            on_surface_weighted=weighted.n_on_surface,
            on_surface_uncertainty=uncertainty.n_on_surface,
            improvement=effective_tap_improvement(weighted, uncertainty)))
    return rows
