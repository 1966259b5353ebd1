"""Trace and reconstruction metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import CandidateGrid, ExplorationState

__all__ = [
    "BudgetMismatchError",
    "EmptyFootprintError",
    "EmptyTraceError",
    "MissingSnapshotsError",
    "TraceMetrics",
    "effective_tap_improvement",
    "mean_variance_curve",
    "on_surface_ratio",
    "surface_rmse",
    "trace_metrics",
]


class EmptyTraceError(ValueError):
    """Metric requested on a trace with no taps."""


class BudgetMismatchError(ValueError):
    """Compared traces do not share the same tap count."""


class EmptyFootprintError(ValueError):
    """No evaluation point lies on the object footprint."""


class MissingSnapshotsError(ValueError):
    """Trace lacks the per-iteration snapshots this metric needs."""


def on_surface_ratio(trace) -> float:
    """Fraction of taps that landed on the object."""
    if not trace.records:
        raise EmptyTraceError("trace has no taps")
    flags = [r.result.on_surface for r in trace.records]
    return sum(flags) / len(flags)


def effective_tap_improvement(proposed, baseline) -> float:
    """Difference in on-surface tap counts divided by the shared budget.

    Positive when ``proposed`` landed more taps on the object; antisymmetric
    in its arguments; negative values signal a regression.
    """
    n_proposed = len(proposed.records)
    n_baseline = len(baseline.records)
    if n_proposed != n_baseline or n_proposed == 0:
        raise BudgetMismatchError(
            f"traces have {n_proposed} and {n_baseline} taps")
    return (proposed.n_on_surface - baseline.n_on_surface) / n_proposed


def surface_rmse(state: ExplorationState, scene,
                 eval_resolution: int = 93) -> float:
    """RMSE (cm) of the denormalized height posterior against ground truth.

    Evaluated only at grid points inside the object footprint; desk
    accuracy is trivially high and would mask reconstruction errors.
    The evaluation grid is finer than the default candidate grid so the
    error is not measured only at training points.
    """
    grid = CandidateGrid(eval_resolution)
    mask = np.asarray(scene.contains(grid.points))
    if not mask.any():
        raise EmptyFootprintError("no evaluation point lies on the footprint")
    points = grid.points[mask]
    predicted_cm = state.surface_gp.predict(points) * scene.height_scale_cm
    truth_cm = scene.truth_height_cm(points)
    return float(np.sqrt(np.mean((predicted_cm - truth_cm) ** 2)))


def mean_variance_curve(trace) -> list[float]:
    """Mean height-model variance over the grid after 0, 1, ..., n taps.

    Entry 0 is the prior value 1.0; entry i comes from the snapshot taken
    after tap i, so the trace must carry a snapshot for every iteration.
    """
    expected = list(range(1, len(trace.records) + 1))
    if [s.iteration for s in trace.snapshots] != expected:
        raise MissingSnapshotsError(
            "trace lacks a snapshot for every iteration "
            "(run with snapshot_every=1)")
    return [1.0] + [float(s.uncertainty.mean()) for s in trace.snapshots]


@dataclass(frozen=True)
class TraceMetrics:
    n_taps: int
    n_on_surface: int
    on_surface_ratio: float
    final_rmse_cm: float
    mean_variance_curve: tuple[float, ...] | None


def trace_metrics(trace, scene, eval_resolution: int = 93) -> TraceMetrics:
    """Summary metrics of one finished run."""
    ratio = on_surface_ratio(trace)
    rmse = surface_rmse(trace.final_state, scene, eval_resolution)
    try:
        curve = tuple(mean_variance_curve(trace))
    except MissingSnapshotsError:
        curve = None
    return TraceMetrics(len(trace.records), trace.n_on_surface, ratio, rmse,
                        curve)
