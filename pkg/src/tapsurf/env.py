"""Virtual tapping environment.

Holds ground-truth scene geometry and answers tap queries with a contact
height and an on/off-surface classification. A tap is an instantaneous
geometric query; there is no contact-force or descent simulation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "BOUNDARY_TOL",
    "HeightField",
    "OutOfAreaError",
    "Scene",
    "TapResult",
    "slope_block",
    "wave_block",
]

# fp-safe slack for the inclusive footprint boundary
BOUNDARY_TOL = 1e-9


class OutOfAreaError(ValueError):
    """Tap position outside the normalized search area."""


@dataclass(frozen=True)
class HeightField:
    """Rectangular footprint with a height profile in local (u, v) cm
    coordinates; ``height_fn`` must be non-negative and broadcast over
    arrays. ``profile`` names the profile so scenes can declare their
    geometry in result files."""

    length_cm: float
    width_cm: float
    height_cm: float
    profile: str
    height_fn: Callable

    def __post_init__(self) -> None:
        if self.length_cm <= 0.0 or self.width_cm <= 0.0:
            raise ValueError("footprint dimensions must be positive")


def wave_block() -> HeightField:
    """Wavy block, 16 x 6 cm footprint, heights 3..11 cm.

    Two full sine periods along the length, constant across the width.
    """

    def profile(u, v):
        return 7.0 + 4.0 * np.sin(2.0 * np.pi * np.asarray(u, dtype=float) / 8.0)

    return HeightField(16.0, 6.0, 11.0, "wave: 7 + 4*sin(2*pi*u/8)", profile)


def slope_block() -> HeightField:
    """Sloped block, 17 x 6 cm footprint, linear ramp 0..8 cm along the length."""

    def profile(u, v):
        return 8.0 * np.asarray(u, dtype=float) / 17.0

    return HeightField(17.0, 6.0, 8.0, "slope: 8*u/17", profile)


@dataclass(frozen=True)
class TapResult:
    """Outcome of one tap: normalized height, classification, raw height."""

    height: float
    on_surface: bool
    raw_height_cm: float


@dataclass(frozen=True)
class Scene:
    """An object placed on a desk inside a rectangular search area.

    Positions are queried in normalized [0, 1]^2 coordinates and mapped to
    centimeters via ``area_cm``; heights are normalized by
    ``height_scale_cm``. Immutable; ``tap`` is pure when ``noise_sd_cm``
    is 0 (the default).
    """

    block: HeightField
    placement_cm: tuple[float, float] = (5.0, 8.5)
    area_cm: tuple[float, float] = (23.0, 23.0)
    desk_height_cm: float = 0.0
    height_scale_cm: float = 15.0
    noise_sd_cm: float = 0.0

    def __post_init__(self) -> None:
        ax, ay = self.area_cm
        px, py = self.placement_cm
        if ax <= 0.0 or ay <= 0.0:
            raise ValueError("search area must have positive side lengths")
        if self.height_scale_cm <= 0.0:
            raise ValueError("height_scale_cm must be positive")
        if self.noise_sd_cm < 0.0:
            raise ValueError("noise_sd_cm must be non-negative")
        if (px < 0.0 or py < 0.0 or px + self.block.length_cm > ax
                or py + self.block.width_cm > ay):
            raise ValueError("object footprint must fit inside the search area")

    def contains_cm(self, x_cm, y_cm):
        """Inclusive point-in-footprint test in cm coordinates (vectorized)."""
        px, py = self.placement_cm
        return ((x_cm >= px - BOUNDARY_TOL)
                & (x_cm <= px + self.block.length_cm + BOUNDARY_TOL)
                & (y_cm >= py - BOUNDARY_TOL)
                & (y_cm <= py + self.block.width_cm + BOUNDARY_TOL))

    def contains(self, points_norm) -> np.ndarray:
        """Footprint mask for normalized positions."""
        pts = np.asarray(points_norm, dtype=float)
        return self.contains_cm(pts[..., 0] * self.area_cm[0],
                                pts[..., 1] * self.area_cm[1])

    def truth_height_cm(self, points_norm) -> np.ndarray:
        """Ground-truth height (cm) at normalized positions; desk height
        outside the footprint."""
        pts = np.asarray(points_norm, dtype=float)
        x_cm = pts[..., 0] * self.area_cm[0]
        y_cm = pts[..., 1] * self.area_cm[1]
        inside = self.contains_cm(x_cm, y_cm)
        px, py = self.placement_cm
        on_block = np.asarray(self.block.height_fn(x_cm - px, y_cm - py),
                              dtype=float)
        return np.where(inside, on_block, self.desk_height_cm)

    def tap(self, position, rng: np.random.Generator | None = None) -> TapResult:
        """Probe one normalized position.

        Returns the (optionally noisy) object height when the position lies
        on the closed footprint, otherwise the exact desk height. Noise
        only perturbs on-surface measurements, so an off-surface result
        always reports the desk height.

        Raises
        ------
        OutOfAreaError
            If the position is outside [0, 1]^2.
        """
        x, y = float(position[0]), float(position[1])
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise OutOfAreaError(f"tap position ({x}, {y}) is outside the "
                                 "normalized search area")
        x_cm = x * self.area_cm[0]
        y_cm = y * self.area_cm[1]
        if bool(self.contains_cm(x_cm, y_cm)):
            px, py = self.placement_cm
            raw = float(self.block.height_fn(x_cm - px, y_cm - py))
            if self.noise_sd_cm > 0.0:
                if rng is None:
                    raise ValueError("height noise is enabled; tap needs an rng")
                raw += float(rng.normal(0.0, self.noise_sd_cm))
            return TapResult(raw / self.height_scale_cm, True, raw)
        return TapResult(self.desk_height_cm / self.height_scale_cm, False,
                         self.desk_height_cm)

    def fingerprint(self) -> str:
        """Short stable hash of the scene geometry, including the profile."""
        desc = "|".join([
            self.block.profile,
            f"{self.block.length_cm}x{self.block.width_cm}x{self.block.height_cm}",
            f"place={self.placement_cm[0]},{self.placement_cm[1]}",
            f"area={self.area_cm[0]},{self.area_cm[1]}",
            f"desk={self.desk_height_cm}",
            f"scale={self.height_scale_cm}",
            f"noise={self.noise_sd_cm}",
        ])
        return hashlib.sha256(desc.encode("utf-8")).hexdigest()[:12]
