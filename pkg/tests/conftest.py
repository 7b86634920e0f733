import numpy as np
import pytest

from wavefarm.climate import build_spectrum, synthetic_climate, WaveClimate
from wavefarm.hydro import default_buoy_spec, default_hydro_table


@pytest.fixture(scope="session")
def table():
    return default_hydro_table()


@pytest.fixture(scope="session")
def perth():
    return synthetic_climate("perth_like")


@pytest.fixture(scope="session")
def sydney():
    return synthetic_climate("sydney_like")


@pytest.fixture(scope="session")
def spec(table, perth):
    return default_buoy_spec(table, perth.modal_frequency())


@pytest.fixture(scope="session")
def small_climate():
    """Two-state climate on a coarse grid, cheap enough for optimizer loops."""
    states = ((build_spectrum(2.5, 11.0, 2.0, 25.0, n_omega=8, n_beta=6), 0.6),
              (build_spectrum(3.5, 12.5, 2.3, 25.0, n_omega=8, n_beta=6), 0.4))
    return WaveClimate(states, 2.0, 25.0, name="desk")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
