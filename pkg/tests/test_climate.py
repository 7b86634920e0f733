import numpy as np
import pytest

from wavefarm.climate import (build_spectrum, load_climate_csv, save_climate_csv,
                              synthetic_climate)
from wavefarm.errors import InvalidClimateError
from wavefarm.hydro import PowerEvaluator, annual_power


def directional_factor(state):
    """Recover D(beta) from the grid: S = S_f(omega) x D(beta)."""
    row = state.spectrum.sum(axis=0)
    return row / (row.sum() * state.d_beta)


class TestBuildSpectrum:
    def test_direction_normalization(self):
        for spread in (1.0, 2.0, 25.0, 200.0):
            state = build_spectrum(2.0, 11.0, 1.3, spread)
            assert abs(directional_factor(state).sum() * state.d_beta - 1.0) < 1e-6

    def test_frequency_quadrature_within_one_percent(self):
        for hs, tp in ((2.0, 11.0), (3.0, 12.0), (4.5, 13.0), (2.5, 12.5)):
            state = build_spectrum(hs, tp, 0.0, 10.0)
            s_f = state.spectrum.sum(axis=1) * state.d_beta  # D integrates to 1
            integral = s_f.sum() * state.d_omega
            assert abs(integral - hs**2 / 16.0) <= 0.01 * hs**2 / 16.0

    def test_doubling_hs_quadruples_energy(self):
        a = build_spectrum(1.5, 12.0, 0.4, 5.0)
        b = build_spectrum(3.0, 12.0, 0.4, 5.0)
        ratio = b.spectrum.sum() / a.spectrum.sum()
        assert ratio == pytest.approx(4.0, rel=1e-12)

    def test_large_spread_concentrates(self):
        beta0 = np.pi / 3  # a node of the default 12-point grid
        state = build_spectrum(2.0, 11.0, beta0, 200.0)
        d = directional_factor(state)
        near = np.abs(np.angle(np.exp(1j * (state.beta - beta0)))) <= np.deg2rad(15.0)
        assert d[near].sum() / d.sum() >= 0.99

    def test_deterministic(self):
        a = build_spectrum(2.0, 11.0, 1.0, 25.0)
        b = build_spectrum(2.0, 11.0, 1.0, 25.0)
        np.testing.assert_array_equal(a.spectrum, b.spectrum)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidClimateError):
            build_spectrum(-1.0, 10.0, 0.0, 5.0)
        with pytest.raises(InvalidClimateError):
            build_spectrum(2.0, 10.0, 0.0, 0.0)


class TestSyntheticClimates:
    def circular_std(self, climate):
        mass, vec = 0.0, 0.0
        for state, occ in climate.states:
            d = directional_factor(state)
            vec += occ * np.sum(d * np.exp(1j * state.beta)) * state.d_beta
            mass += occ
        r = abs(vec / mass)
        return np.sqrt(-2.0 * np.log(r))

    def test_perth_narrower_than_sydney(self, perth, sydney):
        assert self.circular_std(perth) < self.circular_std(sydney)

    def test_occurrences_sum_to_one(self, perth, sydney):
        assert perth.occurrences.sum() == pytest.approx(1.0, abs=1e-9)
        assert sydney.occurrences.sum() == pytest.approx(1.0, abs=1e-9)

    def test_unknown_site(self):
        with pytest.raises(InvalidClimateError):
            synthetic_climate("mars_like")

    def test_rotation_sensitivity_contrast(self, table, spec, perth, sydney):
        # A fixed 9-buoy layout rotated through 45 degree steps: the narrow
        # climate sees pronounced interference changes, the broad one has
        # them smeared out.
        from wavefarm.farm import farm_side
        side = farm_side(9)
        center = side / 2.0
        base = np.array([(r * 75.0 - 75.0, c * 75.0 - 75.0)
                         for r in range(3) for c in range(3)], dtype=float)
        base[4] += (18.0, -9.0)  # break the symmetry
        variances = {}
        for climate in (perth, sydney):
            evaluator = PowerEvaluator(spec, table, climate)
            powers = []
            for step in range(8):
                angle = np.deg2rad(45.0 * step)
                rot = np.array([[np.cos(angle), -np.sin(angle)],
                                [np.sin(angle), np.cos(angle)]])
                powers.append(evaluator.annual_power(base @ rot.T + center))
            variances[climate.name] = np.var(powers) / np.mean(powers) ** 2
        assert variances["perth_like"] > variances["sydney_like"]


class TestClimateCsv:
    def test_single_row(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("hs,tp,beta0,spread,occurrence\n2.0,11.0,0.5,25.0,1.0\n")
        climate = load_climate_csv(path)
        assert len(climate.states) == 1
        assert climate.dominant_direction == 0.5

    def test_bad_occurrence_sum(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("hs,tp,beta0,spread,occurrence\n"
                        "2.0,11.0,0.5,25.0,0.6\n3.0,12.0,0.5,25.0,0.3\n")
        with pytest.raises(InvalidClimateError, match="off by -1.000e-01"):
            load_climate_csv(path)

    def test_malformed_row_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("hs,tp,beta0,spread,occurrence\n2.0,abc,0.5,25.0,1.0\n")
        with pytest.raises(InvalidClimateError, match="line 2"):
            load_climate_csv(path)

    def test_three_rows_weighted_power(self, tmp_path, table, spec):
        path = tmp_path / "three.csv"
        rows = ((2.0, 11.0, 0.4, 20.0, 0.5), (3.0, 12.0, 1.2, 20.0, 0.3),
                (4.0, 13.0, 2.1, 20.0, 0.2))
        path.write_text("hs,tp,beta0,spread,occurrence\n"
                        + "".join(f"{h},{t},{b},{s},{o}\n" for h, t, b, s, o in rows))
        climate = load_climate_csv(path, n_omega=6, n_beta=4)
        pos = np.array([[0.0, 0.0], [80.0, 20.0]])
        evaluator = PowerEvaluator(spec, table, climate)
        manual = float(np.dot(climate.occurrences, evaluator.state_powers(pos)))
        assert annual_power(pos, spec, table, climate) == pytest.approx(manual, rel=1e-12)
        assert [s.hs for s, _ in climate.states] == [2.0, 3.0, 4.0]

    def test_round_trip(self, tmp_path, perth):
        path = tmp_path / "perth.csv"
        save_climate_csv(perth, path)
        loaded = load_climate_csv(path)
        assert len(loaded.states) == len(perth.states)
        for (a, oa), (b, ob) in zip(loaded.states, perth.states):
            assert oa == ob
            np.testing.assert_array_equal(a.spectrum, b.spectrum)
