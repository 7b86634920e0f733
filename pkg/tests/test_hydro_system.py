import numpy as np
import pytest
from scipy.special import jn_zeros

from wavefarm.errors import InvalidLayoutError, SolverError
from wavefarm.hydro import (GRAVITY, Coupling, FarmSystem, assemble_farm_system,
                            power_regular, solve_motion)


def gaussian_elimination(a, b):
    """Independent dense-solve oracle: partial-pivot elimination, no LAPACK."""
    a = a.astype(complex).copy()
    b = b.astype(complex).copy()
    n = a.shape[0]
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    x = np.zeros(n, dtype=complex)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def scalar_system(m_plus_a=2.0, b_plus_d=1.0, k=1.0, d_pto=0.5, f=1.0):
    one = np.eye(1)
    return FarmSystem(mass_matrix=m_plus_a * one, added_mass=0.0 * one,
                      damping=(b_plus_d - d_pto) * one, pto_stiffness=k * one,
                      pto_damping=d_pto * one, excitation=np.array([f + 0j]))


class TestAssemble:
    def test_single_buoy_diagonal(self, table, spec):
        sys1 = assemble_farm_system(np.array([[10.0, 20.0]]), spec, table, 0.9, 0.3)
        assert sys1.dim == 3
        for m in (sys1.added_mass, sys1.damping, sys1.pto_damping):
            assert np.count_nonzero(m - np.diag(np.diag(m))) == 0
        _, _, excitation = table.interpolate(0.9)
        np.testing.assert_allclose(np.abs(sys1.excitation), excitation)

    def test_distant_pair_decouples(self, table, spec):
        sys2 = assemble_farm_system(np.array([[0.0, 0.0], [5.0e4, 0.0]]),
                                    spec, table, 0.9, 0.0)
        off = sys2.damping[0, 3]
        assert abs(off) < 1e-9 * sys2.damping[0, 0]

    def test_first_bessel_zero_kills_coupling(self, table, spec):
        # Oracle: the tabulated first root of J0; distance so that k d = root.
        omega = 0.9
        k = omega**2 / GRAVITY
        d = float(jn_zeros(0, 1)[0]) / k
        sys2 = assemble_farm_system(np.array([[0.0, 0.0], [d, 0.0]]),
                                    spec, table, omega, 0.0)
        assert abs(sys2.damping[0, 3]) < 1e-9 * sys2.damping[0, 0]

    def test_coupling_symmetry(self, table, spec, rng):
        pos = rng.uniform(0, 500, (5, 2))
        sys5 = assemble_farm_system(pos, spec, table, 1.1, 0.7)
        np.testing.assert_array_equal(sys5.damping, sys5.damping.T)

    def test_excitation_phase(self, table, spec):
        beta = 0.6
        pos = np.array([[120.0, 45.0]])
        sys1 = assemble_farm_system(pos, spec, table, 1.0, beta)
        k = 1.0 / GRAVITY
        expected = np.exp(1j * k * (pos[0, 0] * np.cos(beta) + pos[0, 1] * np.sin(beta)))
        np.testing.assert_allclose(sys1.excitation[0] / np.abs(sys1.excitation[0]),
                                   expected, rtol=1e-12)

    def test_rejects_bad_inputs(self, table, spec):
        with pytest.raises(InvalidLayoutError):
            assemble_farm_system(np.array([[np.nan, 0.0]]), spec, table, 0.9, 0.0)
        from wavefarm.errors import ExtrapolationError
        with pytest.raises(ExtrapolationError):
            assemble_farm_system(np.array([[0.0, 0.0]]), spec, table, 99.0, 0.0)

    def test_coupling_none(self, table, spec):
        sys2 = assemble_farm_system(np.array([[0.0, 0.0], [60.0, 0.0]]), spec,
                                    table, 0.9, 0.0, coupling=Coupling(kind="none"))
        assert sys2.damping[0, 3] == 0.0


class TestSolveMotion:
    def test_scalar_case(self):
        sys1 = scalar_system()
        x = solve_motion(sys1, 1.0)
        np.testing.assert_allclose(x[0], (-1 - 1j) / 2, rtol=1e-12)

    def test_zero_forcing(self):
        sys1 = scalar_system(f=0.0)
        np.testing.assert_array_equal(solve_motion(sys1, 1.0), np.zeros(1))

    def test_against_elimination_oracle(self, table, spec, rng):
        for _ in range(25):
            pos = rng.uniform(0, 400, (4, 2))
            omega = rng.uniform(0.4, 1.8)
            beta = rng.uniform(0, 2 * np.pi)
            system = assemble_farm_system(pos, spec, table, omega, beta)
            x = solve_motion(system, omega)
            z = system.impedance(omega)
            expected = gaussian_elimination(z, system.excitation)
            np.testing.assert_allclose(x, expected, rtol=1e-10)
            residual = np.linalg.norm(z @ x - system.excitation)
            assert residual <= 1e-9 * np.linalg.norm(system.excitation)

    def test_singular_raises(self):
        one = np.eye(1)
        bad = FarmSystem(one, -one, 0 * one, 0 * one, 0 * one, np.array([1 + 0j]))
        with pytest.raises(SolverError, match="omega"):
            solve_motion(bad, 1.0)  # Z = -w^2(M+A) + K = 0


class TestPowerRegular:
    def test_scalar_value(self):
        sys1 = scalar_system(d_pto=0.5)
        x = solve_motion(sys1, 1.0)
        total, per_buoy = power_regular(sys1, x, 1.0)
        assert total == pytest.approx(0.125, rel=1e-12)
        assert per_buoy.sum() == pytest.approx(total)

    def test_no_damping_no_power(self):
        sys1 = scalar_system(d_pto=0.0)
        x = solve_motion(sys1, 1.0)
        total, _ = power_regular(sys1, x, 1.0)
        assert total == 0.0

    def test_elementwise_oracle_two_buoys(self, table, spec, rng):
        pos = np.array([[0.0, 0.0], [90.0, 40.0]])
        omega, beta = 1.1, 0.4
        system = assemble_farm_system(pos, spec, table, omega, beta)
        x = solve_motion(system, omega)
        total, per_buoy = power_regular(system, x, omega)
        # Oracle: D_pto is diagonal here, so power is a plain weighted sum
        # of squared speeds, element by element.
        d = np.diag(system.pto_damping)
        expected = 0.5 * np.sum(d * np.abs(1j * omega * x) ** 2)
        assert total == pytest.approx(expected, rel=1e-12)
        np.testing.assert_allclose(
            per_buoy, [0.5 * np.sum(d[:3] * np.abs(1j * omega * x[:3]) ** 2),
                       0.5 * np.sum(d[3:] * np.abs(1j * omega * x[3:]) ** 2)], rtol=1e-12)

    def test_nonnegative_for_psd_damping(self, rng):
        for _ in range(50):
            dim = 6
            half = rng.normal(size=(dim, dim))
            d_pto = half @ half.T  # PSD by construction
            system = FarmSystem(np.eye(dim), np.zeros((dim, dim)),
                                np.eye(dim), np.eye(dim), d_pto,
                                rng.normal(size=dim) + 1j * rng.normal(size=dim))
            x = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            total, _ = power_regular(system, x, 1.3)
            assert total >= 0.0
