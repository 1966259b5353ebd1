"""Belief state for active tapping.

Two coupled regressors over a shared candidate grid: a height model fed
with tapped heights and a weight model fed with the binary on-surface
indicator. Their posterior variance and clamped posterior mean combine
into the acquisition maps that drive tap selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .gp import GaussianProcess, KernelParams
from .validation import as_points

__all__ = [
    "AcquisitionMaps",
    "CandidateGrid",
    "DEFAULT_SURFACE_KERNEL",
    "DEFAULT_WEIGHT_KERNEL",
    "ExplorationState",
    "GridExhaustedError",
    "TapObservation",
]

DEFAULT_SURFACE_KERNEL = KernelParams()
# Weight-model defaults are calibrated on the simulated scenes, and each is
# a config key. The small positive prior keeps unexplored regions alive as
# candidates while committing the search to objects once found; the short
# lengthscale reflects that on/off transitions are sharp at object edges;
# the large noise damps the ringing that exact interpolation of 0/1 labels
# produces, which the [0, 1] clamp would otherwise turn into dead zones.
DEFAULT_WEIGHT_KERNEL = KernelParams(lengthscale_sq=0.005, noise_var=0.3,
                                     prior_mean=0.01)


class GridExhaustedError(RuntimeError):
    """Every candidate grid point has already been tapped."""


@dataclass(frozen=True)
class TapObservation:
    """One executed tap in normalized coordinates.

    Off-surface taps carry the desk height, which normalizes to 0.
    """

    position: tuple[float, float]
    height: float
    on_surface: bool

    def __post_init__(self) -> None:
        as_points([self.position], name="position")
        if not self.on_surface and self.height != 0.0:
            raise ValueError("off-surface taps must carry height 0 "
                             "(the normalized desk height)")


class CandidateGrid:
    """Uniform grid over [0, 1]^2 with corners at (0, 0) and (1, 1).

    Points are stored row-major: index = row * resolution + col, where rows
    follow y and columns follow x, so index 0 is (0, 0) and increasing
    index scans x fastest.
    """

    def __init__(self, resolution: int):
        resolution = int(resolution)
        if resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        self.resolution = resolution
        self.axis = np.linspace(0.0, 1.0, resolution)
        xs, ys = np.meshgrid(self.axis, self.axis)
        self.points = np.column_stack([xs.ravel(), ys.ravel()])

    def __len__(self) -> int:
        return self.points.shape[0]

    def index_of(self, position, tol: float = 1e-9):
        """Grid index of ``position``, or None if it is not a grid point."""
        x, y = float(position[0]), float(position[1])
        col = int(round(x * (self.resolution - 1)))
        row = int(round(y * (self.resolution - 1)))
        if not (0 <= col < self.resolution and 0 <= row < self.resolution):
            return None
        idx = row * self.resolution + col
        px, py = self.points[idx]
        if abs(px - x) <= tol and abs(py - y) <= tol:
            return idx
        return None


@dataclass(frozen=True, eq=False)
class AcquisitionMaps:
    """The three fields over the grid; ``exploration = uncertainty * weight``
    holds elementwise and bit-exact."""

    uncertainty: np.ndarray
    weight: np.ndarray
    exploration: np.ndarray


@dataclass(frozen=True, eq=False)
class ExplorationState:
    """Immutable snapshot of everything learned from the taps so far.

    ``ingest`` returns a new state with both models refit from scratch
    (tap counts stay small, so simplicity beats incremental updates). Map
    evaluations are pure functions of one state and may run concurrently.
    """

    grid: CandidateGrid
    surface_params: KernelParams
    weight_params: KernelParams
    include_desk_taps: bool
    taps: tuple[TapObservation, ...]
    tapped_indices: frozenset[int]
    surface_gp: GaussianProcess
    weight_gp: GaussianProcess

    @classmethod
    def empty(cls, grid: CandidateGrid,
              surface_params: KernelParams = DEFAULT_SURFACE_KERNEL,
              weight_params: KernelParams = DEFAULT_WEIGHT_KERNEL,
              include_desk_taps: bool = True) -> "ExplorationState":
        """State with no observations: prior height model, prior weights."""
        return cls._build(grid, surface_params, weight_params,
                          include_desk_taps, ())

    @classmethod
    def _build(cls, grid, surface_params, weight_params, include_desk_taps,
               taps: tuple[TapObservation, ...]) -> "ExplorationState":
        surface_taps = taps if include_desk_taps else tuple(
            t for t in taps if t.on_surface)
        surface_gp = GaussianProcess.from_params(surface_params).fit(
            [t.position for t in surface_taps],
            [t.height for t in surface_taps])
        weight_gp = GaussianProcess.from_params(weight_params).fit(
            [t.position for t in taps],
            [1.0 if t.on_surface else 0.0 for t in taps])
        tapped = frozenset(
            idx for idx in (grid.index_of(t.position) for t in taps)
            if idx is not None)
        return cls(grid, surface_params, weight_params, include_desk_taps,
                   taps, tapped, surface_gp, weight_gp)

    @property
    def n_taps(self) -> int:
        return len(self.taps)

    def ingest(self, obs: TapObservation) -> "ExplorationState":
        """Append one tap to both models and refit."""
        return self._build(self.grid, self.surface_params, self.weight_params,
                           self.include_desk_taps, self.taps + (obs,))

    def extend(self, observations: Iterable[TapObservation]) -> "ExplorationState":
        """Append many taps with a single refit (bulk loading)."""
        return self._build(self.grid, self.surface_params, self.weight_params,
                           self.include_desk_taps,
                           self.taps + tuple(observations))

    def height_map(self) -> np.ndarray:
        """Posterior mean of the height model at every grid point."""
        return self.surface_gp.predict(self.grid.points)

    def uncertainty_map(self) -> np.ndarray:
        """Posterior variance of the height model at every grid point."""
        _, var = self.surface_gp.predict(self.grid.points, return_var=True)
        return var

    def weight_map(self) -> np.ndarray:
        """Posterior mean of the weight model, clamped to [0, 1]."""
        return np.clip(self.weight_gp.predict(self.grid.points), 0.0, 1.0)

    def acquisition_maps(self) -> AcquisitionMaps:
        uncertainty = self.uncertainty_map()
        weight = self.weight_map()
        return AcquisitionMaps(uncertainty=uncertainty, weight=weight,
                               exploration=uncertainty * weight)

    def untapped_indices(self) -> np.ndarray:
        """Sorted indices of grid points not yet tapped."""
        tapped = np.fromiter(self.tapped_indices, dtype=int,
                             count=len(self.tapped_indices))
        return np.setdiff1d(np.arange(len(self.grid)), tapped)

    def suggest_next(self, mode: str = "exploration") -> int:
        """Grid index maximizing the selected field over untapped points.

        ``mode`` is "exploration" (uncertainty times weight) or
        "uncertainty". Ties break to the lowest row-major index, so the
        suggestion is deterministic.
        """
        if mode not in ("exploration", "uncertainty"):
            raise ValueError(f"mode must be 'exploration' or 'uncertainty', "
                             f"got {mode!r}")
        if len(self.tapped_indices) >= len(self.grid):
            raise GridExhaustedError("every grid point has been tapped")
        if mode == "uncertainty":
            field = self.uncertainty_map()
        else:
            field = self.acquisition_maps().exploration
        masked = field.astype(float, copy=True)
        if self.tapped_indices:
            masked[list(self.tapped_indices)] = -np.inf
        return int(np.argmax(masked))
