import math

import numpy as np
import pytest

from tapsurf import OutOfAreaError, Scene, slope_block, wave_block


class TestBlocks:
    def test_wave_peak_and_trough(self):
        block = wave_block()
        assert block.height_fn(2.0, 3.0) == pytest.approx(11.0, abs=1e-12)
        assert block.height_fn(6.0, 1.0) == pytest.approx(3.0, abs=1e-12)

    def test_wave_max_matches_declared_height(self):
        block = wave_block()
        u = np.linspace(0.0, block.length_cm, 20001)
        assert abs(block.height_fn(u, 0.0).max() - block.height_cm) <= 1e-6

    def test_wave_two_full_periods(self):
        block = wave_block()
        u = np.linspace(0.0, block.length_cm, 1001)
        h = block.height_fn(u, 0.0)
        assert h.min() == pytest.approx(3.0, abs=1e-6)
        # the profile repeats every 8 cm
        assert np.allclose(block.height_fn(u[u <= 8.0], 0.0),
                           block.height_fn(u[u <= 8.0] + 8.0, 0.0),
                           atol=1e-9)

    def test_wave_constant_across_width(self):
        block = wave_block()
        assert block.height_fn(5.0, 0.0) == block.height_fn(5.0, 6.0)

    def test_slope_ramp(self):
        block = slope_block()
        assert block.height_fn(0.0, 2.0) == 0.0
        assert block.height_fn(17.0, 2.0) == pytest.approx(8.0, abs=1e-12)
        assert block.height_fn(8.5, 2.0) == pytest.approx(4.0, abs=1e-12)

    def test_dimensions(self):
        wave = wave_block()
        slope = slope_block()
        assert (wave.length_cm, wave.width_cm, wave.height_cm) == (16, 6, 11)
        assert (slope.length_cm, slope.width_cm, slope.height_cm) == (17, 6, 8)


class TestTap:
    def test_desk_tap(self, wave_scene):
        result = wave_scene.tap((0.05, 0.05))
        assert result.on_surface is False
        assert result.raw_height_cm == 0.0
        assert result.height == 0.0

    def test_wave_peak_tap(self, wave_scene):
        # local u = 2 -> peak 11 cm, normalized by the 15 cm height scale
        result = wave_scene.tap((7.0 / 23.0, 11.0 / 23.0))
        assert result.on_surface is True
        assert result.raw_height_cm == pytest.approx(11.0, abs=1e-9)
        assert result.height == pytest.approx(11.0 / 15.0, abs=1e-9)

    def test_footprint_boundary_is_on_surface(self, wave_scene):
        assert wave_scene.tap((5.0 / 23.0, 8.5 / 23.0)).on_surface
        assert wave_scene.tap((21.0 / 23.0, 14.5 / 23.0)).on_surface

    def test_out_of_area_rejected(self, wave_scene):
        with pytest.raises(OutOfAreaError):
            wave_scene.tap((1.2, 0.5))
        with pytest.raises(OutOfAreaError):
            wave_scene.tap((0.5, -0.1))

    def test_deterministic_without_noise(self, wave_scene):
        a = wave_scene.tap((0.4, 0.5))
        b = wave_scene.tap((0.4, 0.5))
        assert a == b

    def test_classification_matches_rectangle_test(self, wave_scene):
        rng = np.random.default_rng(0)
        points = rng.random((1000, 2))
        for pos in points:
            x_cm, y_cm = pos[0] * 23.0, pos[1] * 23.0
            expected = (5.0 - 1e-9 <= x_cm <= 21.0 + 1e-9
                        and 8.5 - 1e-9 <= y_cm <= 14.5 + 1e-9)
            assert wave_scene.tap(pos).on_surface == expected

    def test_height_bounds(self, wave_scene):
        rng = np.random.default_rng(1)
        for pos in rng.random((300, 2)):
            raw = wave_scene.tap(pos).raw_height_cm
            assert 0.0 <= raw <= 11.0

    def test_normalization_round_trip(self, wave_scene):
        rng = np.random.default_rng(2)
        for pos in rng.random((100, 2)):
            result = wave_scene.tap(pos)
            assert abs(result.height * 15.0 - result.raw_height_cm) <= 1e-12

    def test_noise_perturbs_only_on_surface_heights(self):
        scene = Scene(block=wave_block(), noise_sd_cm=0.5)
        rng = np.random.default_rng(3)
        noisy = scene.tap((0.5, 0.5), rng)
        assert noisy.on_surface
        assert noisy.raw_height_cm != pytest.approx(
            scene.truth_height_cm(np.array([0.5, 0.5])), abs=1e-6)
        desk = scene.tap((0.05, 0.05), rng)
        assert desk.raw_height_cm == 0.0

    def test_noise_requires_rng(self):
        scene = Scene(block=wave_block(), noise_sd_cm=0.5)
        with pytest.raises(ValueError):
            scene.tap((0.5, 0.5))


class TestScene:
    def test_footprint_must_fit(self):
        with pytest.raises(ValueError):
            Scene(block=wave_block(), placement_cm=(10.0, 8.5))

    def test_truth_height_on_and_off_footprint(self, wave_scene):
        points = np.array([[7.0 / 23.0, 11.0 / 23.0], [0.05, 0.05]])
        truth = wave_scene.truth_height_cm(points)
        assert truth[0] == pytest.approx(11.0, abs=1e-9)
        assert truth[1] == 0.0

    def test_contains_vectorized(self, wave_scene):
        points = np.array([[0.5, 0.5], [0.01, 0.01]])
        assert wave_scene.contains(points).tolist() == [True, False]

    def test_fingerprint_stable_and_geometry_sensitive(self, wave_scene):
        assert wave_scene.fingerprint() == Scene(block=wave_block()).fingerprint()
        moved = Scene(block=wave_block(), placement_cm=(4.0, 8.5))
        assert moved.fingerprint() != wave_scene.fingerprint()
        other = Scene(block=slope_block())
        assert other.fingerprint() != wave_scene.fingerprint()

    def test_rectangular_area(self):
        scene = Scene(block=wave_block(), placement_cm=(0.0, 0.0),
                      area_cm=(16.0, 6.0))
        assert scene.tap((0.5, 0.5)).on_surface
        assert math.isclose(scene.truth_height_cm(np.array([0.125, 0.5])),
                            7.0 + 4.0 * math.sin(2.0 * math.pi * 2.0 / 8.0))
