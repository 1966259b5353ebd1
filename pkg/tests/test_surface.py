import numpy as np
import pytest

from tapsurf import (CandidateGrid, ExplorationState, GaussianProcess,
                     GridExhaustedError, KernelParams, TapObservation)

from conftest import SURFACE_JITTER, WEIGHT_JITTER, random_state, snap_to_grid
from oracles import brute_force_argmax, direct_state_fields


def make_state(grid, taps, surface=SURFACE_JITTER, weight=WEIGHT_JITTER):
    return ExplorationState.empty(grid, surface, weight).extend(taps)


class TestCandidateGrid:
    def test_corners_and_size(self):
        grid = CandidateGrid(5)
        assert len(grid) == 25
        assert tuple(grid.points[0]) == (0.0, 0.0)
        assert tuple(grid.points[-1]) == (1.0, 1.0)

    def test_row_major_order_x_fastest(self):
        grid = CandidateGrid(5)
        assert tuple(grid.points[1]) == (0.25, 0.0)
        assert tuple(grid.points[5]) == (0.0, 0.25)

    def test_uniform_spacing(self):
        grid = CandidateGrid(9)
        assert np.allclose(np.diff(grid.axis), 1.0 / 8.0, atol=1e-15)

    def test_index_of_round_trip(self):
        grid = CandidateGrid(9)
        for idx in (0, 7, 40, 80):
            assert grid.index_of(grid.points[idx]) == idx

    def test_index_of_off_grid_is_none(self):
        grid = CandidateGrid(9)
        assert grid.index_of((0.0601, 0.0)) is None

    def test_too_small_resolution_rejected(self):
        with pytest.raises(ValueError):
            CandidateGrid(1)


class TestEmptyState:
    def test_uncertainty_is_prior_variance(self, empty_state):
        assert np.all(empty_state.uncertainty_map() == 1.0)

    def test_weight_is_prior_mean(self, empty_state):
        assert np.all(empty_state.weight_map() == 0.5)

    def test_exploration_is_product(self, empty_state):
        maps = empty_state.acquisition_maps()
        assert np.all(maps.exploration == 0.5)

    def test_suggestion_breaks_ties_to_lowest_index(self, empty_state):
        assert empty_state.suggest_next("exploration") == 0
        assert empty_state.suggest_next("uncertainty") == 0


class TestIngest:
    def test_on_surface_tap(self, grid9):
        state = make_state(grid9, [TapObservation((0.5, 0.5), 0.6, True)])
        assert state.n_taps == 1
        assert state.surface_gp.X_train_.shape == (1, 2)
        assert state.weight_gp.y_train_.tolist() == [1.0]
        idx = grid9.index_of((0.5, 0.5))
        weight = state.weight_map()
        assert np.argmax(weight) == idx
        assert weight[idx] >= 0.99

    def test_off_surface_tap(self, grid9):
        state = make_state(grid9, [TapObservation((0.125, 0.125), 0.0, False)])
        assert state.surface_gp.y_train_.tolist() == [0.0]
        assert state.weight_gp.y_train_.tolist() == [0.0]
        idx = grid9.index_of((0.125, 0.125))
        assert state.weight_map()[idx] <= 0.01

    def test_off_surface_tap_with_nonzero_height_rejected(self):
        with pytest.raises(ValueError):
            TapObservation((0.1, 0.1), 0.2, False)

    def test_ingest_is_functional(self, empty_state):
        new = empty_state.ingest(TapObservation((0.25, 0.25), 0.3, True))
        assert empty_state.n_taps == 0
        assert new.n_taps == 1

    def test_scripted_taps_reproduce_heights(self, grid9):
        rng = np.random.default_rng(3)
        taps = []
        for idx in rng.choice(len(grid9), size=5, replace=False):
            pos = (float(grid9.points[idx, 0]), float(grid9.points[idx, 1]))
            taps.append(TapObservation(pos, float(rng.uniform(0.1, 0.7)),
                                       True))
        state = make_state(grid9, taps)
        mean = state.surface_gp.predict([t.position for t in taps])
        for value, tap in zip(mean, taps):
            assert value == pytest.approx(tap.height, abs=1e-3)

    def test_desk_taps_can_be_kept_out_of_height_model(self, grid9):
        taps = [TapObservation((0.5, 0.5), 0.6, True),
                TapObservation((0.125, 0.125), 0.0, False)]
        with_desk = ExplorationState.empty(
            grid9, SURFACE_JITTER, WEIGHT_JITTER,
            include_desk_taps=True).extend(taps)
        without_desk = ExplorationState.empty(
            grid9, SURFACE_JITTER, WEIGHT_JITTER,
            include_desk_taps=False).extend(taps)
        assert with_desk.surface_gp.X_train_.shape == (2, 2)
        assert without_desk.surface_gp.X_train_.shape == (1, 2)
        # the weight model always sees every tap
        assert without_desk.weight_gp.X_train_.shape == (2, 2)


class TestMaps:
    def test_single_observation_minimizes_uncertainty_there(self, grid9):
        idx = 40
        pos = (float(grid9.points[idx, 0]), float(grid9.points[idx, 1]))
        state = make_state(grid9, [TapObservation(pos, 0.4, True)])
        assert np.argmin(state.uncertainty_map()) == idx

    def test_product_identity_bit_exact(self):
        for seed in range(10):
            maps = random_state(seed).acquisition_maps()
            assert np.array_equal(maps.exploration,
                                  maps.uncertainty * maps.weight)

    def test_field_ranges(self):
        for seed in range(10):
            maps = random_state(seed).acquisition_maps()
            assert np.all(maps.uncertainty >= 0.0)
            assert np.all(maps.uncertainty <= 1.0 + 1e-9)
            assert np.all(maps.weight >= 0.0)
            assert np.all(maps.weight <= 1.0)
            assert np.all(maps.exploration >= 0.0)
            assert np.all(maps.exploration <= 1.0)
            # both factors are at most 1, so the product is a lower bound
            assert np.all(maps.exploration <= maps.uncertainty + 1e-15)
            assert np.all(maps.exploration <= maps.weight + 1e-15)

    def test_off_surface_tap_never_raises_weight_at_its_position(self):
        for seed in range(8):
            state = random_state(seed)
            untapped = state.untapped_indices()
            idx = int(untapped[seed % len(untapped)])
            pos = (float(state.grid.points[idx, 0]),
                   float(state.grid.points[idx, 1]))
            before = state.weight_map()[idx]
            after = state.ingest(TapObservation(pos, 0.0, False)).weight_map()[idx]
            assert after <= before + 1e-9

    def test_maps_match_per_point_gp_evaluation(self, grid9):
        state = make_state(grid9, [
            TapObservation((0.25, 0.5), 0.3, True),
            TapObservation((0.75, 0.25), 0.0, False),
            TapObservation((0.5, 0.75), 0.5, True),
        ])
        uncertainty = state.uncertainty_map()
        weight = state.weight_map()
        for idx in range(0, len(grid9), 7):
            query = [tuple(grid9.points[idx])]
            _, var = state.surface_gp.predict(query, return_var=True)
            mean = state.weight_gp.predict(query)
            assert abs(uncertainty[idx] - var[0]) <= 1e-10
            assert abs(weight[idx] - np.clip(mean[0], 0.0, 1.0)) <= 1e-10

    def test_maps_match_direct_inversion_oracle(self):
        state = random_state(123, n_taps=6)
        maps = state.acquisition_maps()
        u, w, e = direct_state_fields(state)
        assert np.abs(maps.uncertainty - u).max() <= 1e-8
        assert np.abs(maps.weight - w).max() <= 1e-8
        assert np.abs(maps.exploration - e).max() <= 1e-8


class TestSuggest:
    def fixed_three_tap_state(self, grid9):
        return make_state(grid9, [
            TapObservation(snap_to_grid(grid9, (0.0, 0.4)), 0.0, False),
            TapObservation(snap_to_grid(grid9, (0.75, 0.5)), 0.55, True),
            TapObservation(snap_to_grid(grid9, (0.9, 0.6)), 0.6, True),
        ])

    def test_matches_brute_force_argmax(self, grid9):
        state = self.fixed_three_tap_state(grid9)
        maps = state.acquisition_maps()
        assert state.suggest_next("exploration") == brute_force_argmax(
            maps.exploration, state.tapped_indices)
        assert state.suggest_next("uncertainty") == brute_force_argmax(
            maps.uncertainty, state.tapped_indices)

    def test_off_left_on_right_pulls_argmax_right(self, grid9):
        state = self.fixed_three_tap_state(grid9)
        idx = state.suggest_next("exploration")
        assert state.grid.points[idx, 0] >= 0.5

    def test_suggestion_never_repeats_a_tap(self):
        for seed in range(6):
            state = random_state(seed, n_taps=5)
            for mode in ("exploration", "uncertainty"):
                assert state.suggest_next(mode) not in state.tapped_indices

    def test_one_tap_uncertainty_suggestion_differs(self, grid9):
        state = make_state(grid9, [TapObservation((0.5, 0.5), 0.4, True)])
        idx = state.suggest_next("uncertainty")
        assert idx != grid9.index_of((0.5, 0.5))

    def test_deterministic_across_calls(self):
        state = random_state(42, n_taps=6)
        first = state.suggest_next("exploration")
        assert all(state.suggest_next("exploration") == first
                   for _ in range(5))

    def test_exhausted_grid_raises(self):
        grid = CandidateGrid(2)
        taps = [TapObservation((float(x), float(y)), 0.0, False)
                for x in (0, 1) for y in (0, 1)]
        state = make_state(grid, taps)
        with pytest.raises(GridExhaustedError):
            state.suggest_next("exploration")

    def test_unknown_mode_rejected(self, empty_state):
        with pytest.raises(ValueError):
            empty_state.suggest_next("expected-improvement")


def test_weight_model_uses_its_own_prior(grid9):
    state = ExplorationState.empty(
        grid9, SURFACE_JITTER, KernelParams(prior_mean=0.2))
    assert np.all(state.weight_map() == pytest.approx(0.2))
    assert isinstance(state.weight_gp, GaussianProcess)
