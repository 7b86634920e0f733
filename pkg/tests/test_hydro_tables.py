import numpy as np
import pytest

from wavefarm.errors import ExtrapolationError
from wavefarm.hydro import (GRAVITY, HydroTable, default_buoy_spec,
                            default_hydro_table, load_table_csv, save_table_csv)


def test_invariants_rejected():
    w = np.array([0.5, 0.4])  # not increasing
    ones = np.ones((2, 3))
    with pytest.raises(ValueError):
        HydroTable(w, ones, ones, ones)
    with pytest.raises(ValueError):
        HydroTable(np.array([0.4, 0.5]), ones, -ones, ones)
    with pytest.raises(ValueError):
        HydroTable(np.array([0.4]), np.ones((1, 3)), np.ones((1, 3)), np.ones((1, 3)))


def test_interpolation_hits_nodes_and_midpoints():
    w = np.array([0.5, 1.0, 1.5])
    added = np.array([[1.0], [2.0], [3.0]]) * np.ones((1, 3))
    damping = np.array([[10.0], [20.0], [40.0]]) * np.ones((1, 3))
    excitation = np.array([[5.0], [6.0], [7.0]]) * np.ones((1, 3))
    table = HydroTable(w, added, damping, excitation)

    a, b, f = table.interpolate(1.0)
    assert a[0] == 2.0 and b[0] == 20.0 and f[0] == 6.0
    a, b, f = table.interpolate(1.25)
    assert b[0] == pytest.approx(30.0)
    assert a[0] == pytest.approx(2.5)


def test_extrapolation_refused(table):
    with pytest.raises(ExtrapolationError):
        table.interpolate(table.omega_max + 0.1)
    with pytest.raises(ExtrapolationError):
        table.interpolate(table.omega_min - 0.1)


def test_default_table_shape(table):
    assert np.all(table.damping >= 0)
    # damping peaks where ka = 1
    peak_omega = table.frequencies[np.argmax(table.damping[:, 0])]
    assert peak_omega == pytest.approx(np.sqrt(GRAVITY / 5.0), rel=0.05)


def test_csv_round_trip(tmp_path, table):
    path = tmp_path / "table.csv"
    save_table_csv(table, path)
    loaded = load_table_csv(path)
    np.testing.assert_array_equal(loaded.frequencies, table.frequencies)
    np.testing.assert_array_equal(loaded.damping, table.damping)
    np.testing.assert_array_equal(loaded.excitation, table.excitation)


def test_csv_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("omega,dof,added_mass,damping,excitation\n0.5,0,1,notanumber,3\n")
    with pytest.raises(ValueError, match="line 2"):
        load_table_csv(path)
    path.write_text("omega,added_mass\n")
    with pytest.raises(ValueError, match="header"):
        load_table_csv(path)


def test_default_spec_matches_modal_damping(table, perth):
    spec = default_buoy_spec(table, perth.modal_frequency())
    _, damping, _ = table.interpolate(perth.modal_frequency())
    np.testing.assert_allclose(spec.pto_damping, damping)
