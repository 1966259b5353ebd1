import numpy as np
import pytest

from tapsurf import (CandidateGrid, ExplorationState, KernelParams, Scene,
                     TapObservation, wave_block)

# Jitter-level parameters: exact-interpolation regime used by the worked
# examples (weight prior 0.5 keeps the no-data acquisition at 0.5).
SURFACE_JITTER = KernelParams(lengthscale_sq=0.017, noise_var=1e-6,
                              prior_mean=0.0)
WEIGHT_JITTER = KernelParams(lengthscale_sq=0.017, noise_var=1e-6,
                             prior_mean=0.5)


@pytest.fixture
def wave_scene():
    return Scene(block=wave_block())


@pytest.fixture
def grid9():
    return CandidateGrid(9)


@pytest.fixture
def empty_state(grid9):
    return ExplorationState.empty(grid9, SURFACE_JITTER, WEIGHT_JITTER)


def snap_to_grid(grid, position):
    """Nearest grid point, returned as an exact grid position tuple."""
    res = grid.resolution
    col = int(round(position[0] * (res - 1)))
    row = int(round(position[1] * (res - 1)))
    idx = row * res + col
    return (float(grid.points[idx, 0]), float(grid.points[idx, 1]))


def random_state(seed, resolution=9, n_taps=None,
                 surface_params=None, weight_params=None):
    """A reproducible ExplorationState with mixed on/off taps on the grid."""
    rng = np.random.default_rng(seed)
    grid = CandidateGrid(resolution)
    if n_taps is None:
        n_taps = int(rng.integers(0, 9))
    if surface_params is None:
        surface_params = KernelParams(
            lengthscale_sq=float(rng.uniform(0.005, 0.1)),
            noise_var=float(rng.uniform(1e-6, 0.3)),
            prior_mean=0.0)
    if weight_params is None:
        weight_params = KernelParams(
            lengthscale_sq=float(rng.uniform(0.005, 0.1)),
            noise_var=float(rng.uniform(1e-6, 0.3)),
            prior_mean=float(rng.uniform(0.05, 0.95)))
    state = ExplorationState.empty(grid, surface_params, weight_params)
    indices = rng.choice(len(grid), size=n_taps, replace=False)
    observations = []
    for idx in indices:
        pos = (float(grid.points[idx, 0]), float(grid.points[idx, 1]))
        on = bool(rng.random() < 0.5)
        height = float(rng.uniform(0.1, 0.7)) if on else 0.0
        observations.append(TapObservation(pos, height, on))
    return state.extend(observations)
