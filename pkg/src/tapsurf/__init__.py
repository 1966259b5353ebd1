"""Active tactile surface mapping with coupled Gaussian-process models.

A height model and an on-surface weight model share a candidate grid; the
product of posterior variance and clamped weight mean decides where to tap
next. Includes a virtual tapping environment, a deterministic run loop,
trace metrics and an experiment CLI.
"""

from .config import (ConfigError, ExperimentConfig, OutputOptions,
                     apply_sweep_value, load_config)
from .env import (HeightField, OutOfAreaError, Scene, TapResult, slope_block,
                  wave_block)
from .explore import (ComparisonRow, MapSnapshot, RNG_KIND, RunConfig,
                      RunTrace, Strategy, TapRecord, choose_index,
                      compare_strategies, initial_tap_indices, run)
from .gp import (FactorizationError, GaussianProcess, KernelParams,
                 kernel_matrix, rbf)
from .metrics import (BudgetMismatchError, EmptyFootprintError,
                      EmptyTraceError, MissingSnapshotsError, TraceMetrics,
                      effective_tap_improvement, mean_variance_curve,
                      on_surface_ratio, surface_rmse, trace_metrics)
from .surface import (AcquisitionMaps, CandidateGrid, ExplorationState,
                      GridExhaustedError, TapObservation)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionMaps",
    "BudgetMismatchError",
    "CandidateGrid",
    "ComparisonRow",
    "ConfigError",
    "EmptyFootprintError",
    "EmptyTraceError",
    "ExperimentConfig",
    "ExplorationState",
    "FactorizationError",
    "GaussianProcess",
    "GridExhaustedError",
    "HeightField",
    "KernelParams",
    "MapSnapshot",
    "MissingSnapshotsError",
    "OutOfAreaError",
    "OutputOptions",
    "RNG_KIND",
    "RunConfig",
    "RunTrace",
    "Scene",
    "Strategy",
    "TapObservation",
    "TapRecord",
    "TapResult",
    "TraceMetrics",
    "apply_sweep_value",
    "choose_index",
    "compare_strategies",
    "effective_tap_improvement",
    "initial_tap_indices",
    "kernel_matrix",
    "load_config",
    "mean_variance_curve",
    "on_surface_ratio",
    "rbf",
    "run",
    "slope_block",
    "surface_rmse",
    "trace_metrics",
    "wave_block",
]
