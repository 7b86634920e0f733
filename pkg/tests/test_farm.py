import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavefarm.errors import InvalidLayoutError
from wavefarm.farm import (clamp_to_farm, farm_side, is_feasible, load_layout,
                           measure_violations, penalty, repair, save_layout)


class TestFarmSide:
    def test_paper_sizes(self):
        assert farm_side(49) == pytest.approx(989.9494936611665, rel=1e-12)
        assert farm_side(100) == pytest.approx(1414.2135623730951, rel=1e-12)
        assert farm_side(1) == pytest.approx(141.4213562373095, rel=1e-12)

    def test_rejects_zero(self):
        with pytest.raises(InvalidLayoutError):
            farm_side(0)


def triangle_with_sides(ab, ac, bc):
    """Place three points with the prescribed pairwise distances."""
    x = (ab**2 + ac**2 - bc**2) / (2 * ab)
    y = np.sqrt(ac**2 - x**2)
    return np.array([[0.0, 0.0], [ab, 0.0], [x, y]])


class TestMeasureViolations:
    def test_hand_distances(self):
        pos = triangle_with_sides(40.0, 45.0, 60.0)
        dist = np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)
        assert sorted(np.round(dist[np.triu_indices(3, 1)], 9)) == [40.0, 45.0, 60.0]
        report = measure_violations(pos)
        assert report.sum_dist == pytest.approx(15.0, abs=1e-9)
        assert len(report.violating_pairs) == 2

    def test_all_clear(self):
        pos = np.array([[0.0, 0.0], [60.0, 0.0], [0.0, 70.0]])
        report = measure_violations(pos)
        assert report.sum_dist == 0.0
        assert report.violating_pairs == []

    def test_collinear_hand_enumeration(self):
        # Pairs: (0,1) at 30 and (1,2) at 30 violate by 20 each; (0,2) at 60
        # is clear.  Total 40.
        pos = np.array([[0.0, 0.0], [30.0, 0.0], [60.0, 0.0]])
        report = measure_violations(pos)
        assert report.sum_dist == pytest.approx(40.0, abs=1e-12)

    @given(st.floats(1.0, 45.0))
    def test_monotone_in_approach(self, dist):
        # Moving a buoy strictly closer to its violating partner cannot
        # reduce the total violation.
        near = measure_violations(np.array([[0.0, 0.0], [dist, 0.0]]))
        nearer = measure_violations(np.array([[0.0, 0.0], [dist * 0.9, 0.0]]))
        assert nearer.sum_dist >= near.sum_dist


class TestPenalty:
    def test_pins(self):
        assert penalty(0.0) == 1.0
        assert penalty(1.0) == 1048576.0
        assert penalty(0.5) == pytest.approx(1.5**20, rel=1e-15)

    @given(st.floats(0.0, 1e4), st.floats(0.0, 1e4))
    def test_strictly_increasing(self, a, b):
        lo, hi = sorted((a, b))
        if hi - lo < 1e-9 * (1.0 + hi):  # below float resolution of (x+1)^20
            return
        assert penalty(lo) < penalty(hi)


class TestClamp:
    def test_examples(self):
        out = clamp_to_farm(np.array([[-10.0, 500.0]]), 990.0)
        np.testing.assert_array_equal(out, [[0.0, 500.0]])
        out = clamp_to_farm(np.array([[995.0, 1200.0]]), 990.0)
        np.testing.assert_array_equal(out, [[990.0, 990.0]])

    @given(st.lists(st.tuples(st.floats(-2e3, 2e3), st.floats(-2e3, 2e3)),
                    min_size=1, max_size=8))
    def test_idempotent(self, points):
        pos = np.array(points)
        once = clamp_to_farm(pos, 700.0)
        np.testing.assert_array_equal(clamp_to_farm(once, 700.0), once)
        assert np.all(once >= 0.0) and np.all(once <= 700.0)


class TestRepair:
    def test_feasible_returned_unchanged(self, rng):
        pos = np.array([[10.0, 10.0], [80.0, 10.0], [10.0, 90.0]])
        out, ok = repair(pos, 200.0, rng)
        assert ok
        np.testing.assert_array_equal(out, pos)

    def test_two_close_buoys(self, rng):
        out, ok = repair(np.array([[100.0, 100.0], [130.0, 100.0]]), 400.0, rng)
        assert ok
        assert np.linalg.norm(out[0] - out[1]) >= 50.0
        assert np.all(out >= 0.0) and np.all(out <= 400.0)

    def test_coincident_buoys(self, rng):
        out, ok = repair(np.array([[50.0, 50.0], [50.0, 50.0]]), 300.0, rng)
        assert ok
        assert np.linalg.norm(out[0] - out[1]) >= 50.0

    def test_random_sixteen_buoy_layouts(self):
        # Every outcome is either feasible or explicitly flagged; nothing
        # silently infeasible.
        side = farm_side(16)
        repaired = 0
        for seed in range(100):
            r = np.random.default_rng(seed)
            pos = r.uniform(0, side, (16, 2))
            out, ok = repair(pos, side, r)
            if ok:
                repaired += 1
                assert is_feasible(out, side)
            else:
                assert not is_feasible(out, side)
        assert repaired >= 95  # uniform N=16 layouts are almost always fixable

    def test_never_touches_nonviolating_buoys(self, rng):
        pos = np.array([[10.0, 10.0], [40.0, 10.0], [300.0, 300.0]])
        out, ok = repair(pos, 400.0, rng)
        assert ok
        np.testing.assert_array_equal(out[2], pos[2])


class TestLayoutFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "layout.json"
        pos = np.array([[1.5, 2.5], [100.0, 200.0]])
        save_layout(path, pos, 565.6854249492379)
        layout = load_layout(path)
        np.testing.assert_array_equal(layout.positions, pos)
        assert layout.side == 565.6854249492379

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"positions": [[0, 0]]}')
        with pytest.raises(InvalidLayoutError):
            load_layout(path)
