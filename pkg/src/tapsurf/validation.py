"""Lightweight input checks shared by the estimators and the simulator."""

from __future__ import annotations

import numpy as np

# Slack for "inside the unit square" checks. Positions taken from the
# candidate grid are exact; scripted callers may carry 1-ulp drift.
DOMAIN_TOL = 1e-9


def as_points(X, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a float array of shape (n, 2) of unit-square positions."""
    pts = np.asarray(X, dtype=float)
    if pts.ndim == 1 and pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {pts.shape}")
    if pts.size:
        if not np.isfinite(pts).all():
            raise ValueError(f"{name} contains non-finite values")
        if pts.min() < -DOMAIN_TOL or pts.max() > 1.0 + DOMAIN_TOL:
            raise ValueError(f"{name} must lie inside the unit square [0, 1]^2")
    return pts


def as_values(y, n: int, name: str = "y") -> np.ndarray:
    """Coerce ``y`` to a float vector of length ``n``."""
    vals = np.asarray(y, dtype=float).ravel()
    if vals.shape[0] != n:
        raise ValueError(f"{name} must have {n} entries, got {vals.shape[0]}")
    if vals.size and not np.isfinite(vals).all():
        raise ValueError(f"{name} contains non-finite values")
    return vals
