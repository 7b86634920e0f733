import numpy as np
import pytest

from wavefarm.climate import SeaState, WaveClimate, build_spectrum
from wavefarm.errors import InvalidClimateError
from wavefarm.hydro import (Coupling, PowerEvaluator, annual_power,
                            assemble_farm_system, power_regular,
                            power_sea_state, q_factor, solve_motion)


def single_node_state(omega, beta, weight=1.0):
    """Spectrum concentrated in one bin with S * dw * db = weight."""
    return SeaState(hs=1.0, tp=10.0, beta0=beta, spread=1.0,
                    omega=np.array([omega]), beta=np.array([beta]),
                    spectrum=np.array([[weight]]), d_omega=1.0, d_beta=1.0)


def reference_state_power(positions, spec, table, state, coupling=Coupling()):
    """Quadrature through the full-matrix path: assemble, solve, power."""
    total = 0.0
    weights = state.node_weights
    for iw, omega in enumerate(state.omega):
        for ib, beta in enumerate(state.beta):
            if weights[iw, ib] == 0.0:
                continue
            system = assemble_farm_system(positions, spec, table, float(omega),
                                          float(beta), coupling)
            x = solve_motion(system, float(omega))
            p, _ = power_regular(system, x, float(omega))
            total += weights[iw, ib] * p
    return total


class TestPowerSeaState:
    def test_single_bin_equals_regular_power(self, table, spec):
        pos = np.array([[0.0, 0.0], [70.0, 30.0]])
        state = single_node_state(0.9, 0.5)
        p = power_sea_state(pos, spec, table, state)
        system = assemble_farm_system(pos, spec, table, 0.9, 0.5)
        expected, _ = power_regular(system, solve_motion(system, 0.9), 0.9)
        assert p == pytest.approx(expected, rel=1e-9)

    def test_zero_spectrum(self, table, spec):
        state = SeaState(hs=1.0, tp=10.0, beta0=0.0, spread=1.0,
                         omega=np.array([0.8, 0.9]), beta=np.array([0.0]),
                         spectrum=np.zeros((2, 1)), d_omega=0.1, d_beta=1.0)
        assert power_sea_state(np.array([[0.0, 0.0]]), spec, table, state) == 0.0

    def test_two_bin_hand_sum(self, table, spec):
        pos = np.array([[0.0, 0.0], [65.0, 0.0]])
        state = SeaState(hs=1.0, tp=10.0, beta0=0.0, spread=1.0,
                         omega=np.array([0.7, 1.1]), beta=np.array([0.2]),
                         spectrum=np.array([[2.0], [3.0]]), d_omega=0.25, d_beta=0.5)
        expected = reference_state_power(pos, spec, table, state)
        assert power_sea_state(pos, spec, table, state) == pytest.approx(expected, rel=1e-9)

    def test_empty_grid_rejected(self):
        with pytest.raises(InvalidClimateError):
            SeaState(hs=1.0, tp=10.0, beta0=0.0, spread=1.0,
                     omega=np.array([]), beta=np.array([]),
                     spectrum=np.zeros((0, 0)), d_omega=1.0, d_beta=1.0)


class TestAnnualPower:
    def test_single_state_identity(self, table, spec):
        state = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=6, n_beta=4)
        climate = WaveClimate(((state, 1.0),), 0.8, 10.0)
        pos = np.array([[0.0, 0.0], [80.0, 10.0]])
        assert annual_power(pos, spec, table, climate) == pytest.approx(
            power_sea_state(pos, spec, table, state), rel=1e-12)

    def test_two_state_mean(self, table, spec):
        s1 = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=6, n_beta=4)
        s2 = build_spectrum(3.0, 12.0, 1.9, 10.0, n_omega=6, n_beta=4)
        climate = WaveClimate(((s1, 0.5), (s2, 0.5)), 0.8, 10.0)
        pos = np.array([[0.0, 0.0], [80.0, 10.0]])
        mean = 0.5 * (power_sea_state(pos, spec, table, s1)
                      + power_sea_state(pos, spec, table, s2))
        assert annual_power(pos, spec, table, climate) == pytest.approx(mean, rel=1e-12)

    def test_three_state_scalar_oracle(self, table, spec):
        states = [build_spectrum(hs, tp, b, 8.0, n_omega=5, n_beta=4)
                  for hs, tp, b in ((1.5, 11.0, 0.3), (2.5, 12.0, 1.1), (3.5, 13.0, 2.4))]
        occ = (0.2, 0.5, 0.3)
        climate = WaveClimate(tuple(zip(states, occ)), 1.1, 8.0)
        pos = np.array([[10.0, 0.0], [90.0, 55.0], [30.0, 140.0]])
        expected = sum(o * reference_state_power(pos, spec, table, s)
                       for s, o in zip(states, occ))
        assert annual_power(pos, spec, table, climate) == pytest.approx(expected, rel=1e-9)

    def test_occurrences_must_sum_to_one(self, table, spec):
        s1 = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=4, n_beta=4)
        with pytest.raises(InvalidClimateError, match="sum"):
            WaveClimate(((s1, 0.7),), 0.8, 10.0)

    def test_permutation_invariance_exact(self, table, spec, small_climate, rng):
        evaluator = PowerEvaluator(spec, table, small_climate)
        pos = rng.uniform(0, 500, (7, 2))
        base = evaluator.annual_power(pos)
        for _ in range(5):
            perm = rng.permutation(7)
            assert evaluator.annual_power(pos[perm]) == base
            np.testing.assert_array_equal(
                evaluator.per_buoy_annual(pos[perm]), evaluator.per_buoy_annual(pos)[perm])

    def test_matches_full_matrix_route(self, table, spec, rng):
        # Dual-route check: the batched per-DOF kernel against the dense
        # 3N x 3N assemble/solve/power pipeline.
        states = [build_spectrum(2.2, 11.5, 0.9, 6.0, n_omega=4, n_beta=3),
                  build_spectrum(3.1, 12.5, 2.0, 6.0, n_omega=4, n_beta=3)]
        climate = WaveClimate(((states[0], 0.45), (states[1], 0.55)), 0.9, 6.0)
        pos = rng.uniform(0, 400, (3, 2))
        expected = sum(o * reference_state_power(pos, spec, table, s)
                       for s, o in zip(states, (0.45, 0.55)))
        assert annual_power(pos, spec, table, climate) == pytest.approx(expected, rel=1e-9)


class TestQFactor:
    def test_single_buoy_exact(self, table, spec, small_climate):
        assert q_factor(np.array([[321.0, 77.0]]), spec, table, small_climate) == 1.0

    def test_distant_pair(self, table, spec, small_climate):
        q = q_factor(np.array([[0.0, 0.0], [1.0e4, 0.0]]), spec, table, small_climate)
        assert abs(q - 1.0) < 1e-6

    def test_scale_invariance(self, table, spec):
        state = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=6, n_beta=4)
        scaled = SeaState(hs=state.hs, tp=state.tp, beta0=state.beta0,
                          spread=state.spread, omega=state.omega, beta=state.beta,
                          spectrum=3.0 * state.spectrum, d_omega=state.d_omega,
                          d_beta=state.d_beta)
        pos = np.array([[0.0, 0.0], [75.0, 20.0], [10.0, 95.0]])
        q1 = q_factor(pos, spec, table, WaveClimate(((state, 1.0),), 0.8, 10.0))
        q2 = q_factor(pos, spec, table, WaveClimate(((scaled, 1.0),), 0.8, 10.0))
        assert q2 == pytest.approx(q1, rel=1e-12)

    def test_mixed_grid_climate(self, table, spec):
        # States on different grids are grouped separately but still sum.
        s1 = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=5, n_beta=4)
        s2 = build_spectrum(2.0, 11.0, 0.8, 10.0, n_omega=7, n_beta=3)
        climate = WaveClimate(((s1, 0.5), (s2, 0.5)), 0.8, 10.0)
        pos = np.array([[0.0, 0.0], [70.0, 35.0]])
        expected = 0.5 * (power_sea_state(pos, spec, table, s1)
                          + power_sea_state(pos, spec, table, s2))
        assert annual_power(pos, spec, table, climate) == pytest.approx(expected, rel=1e-12)
