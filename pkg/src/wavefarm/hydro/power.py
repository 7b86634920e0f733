"""Sea-state, annual and q-factor power pipeline.

``PowerEvaluator`` is the workhorse behind every optimizer objective: it
interpolates the coefficient table onto each distinct spectral grid once,
then evaluates layouts through the interaction kernel.  Sea states that
share a grid (the common case) share one kernel call per layout.

Two exactness guarantees the rest of the package relies on:

* annual power is invariant under permutation of buoy indices, bit for
  bit, because positions are canonically ordered before the kernel runs;
* a single-buoy farm reproduces the isolated-buoy computation exactly
  (phases are referenced to the first buoy), so q(N=1) == 1.0.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidLayoutError, UndefinedQError
from .backend import unit_power_grid
from .system import Coupling
from .tables import GRAVITY, BuoySpec, HydroTable


class PowerEvaluator:
    """Annual-power objective for a fixed (spec, table, climate) triple."""

    def __init__(self, spec: BuoySpec, table: HydroTable, climate,
                 coupling: Coupling = Coupling()):
        self.spec = spec
        self.table = table
        self.climate = climate
        self.coupling = coupling
        self.occurrences = climate.occurrences
        self._groups = self._build_groups(climate, table)
        self._isolated = None

    @staticmethod
    def _build_groups(climate, table):
        groups = {}
        for idx, (state, _) in enumerate(climate.states):
            key = (state.omega.tobytes(), state.beta.tobytes())
            if key not in groups:
                omega = state.omega.astype(float)
                added, damping, excitation = table.interpolate(omega)
                groups[key] = {
                    "omega": omega,
                    "wavenumber": omega**2 / GRAVITY,
                    "added": np.ascontiguousarray(added),
                    "damping": np.ascontiguousarray(damping),
                    "excitation": np.ascontiguousarray(excitation),
                    "beta": state.beta.astype(float),
                    "state_indices": [],
                    "weights": [],
                }
            groups[key]["state_indices"].append(idx)
            groups[key]["weights"].append(state.node_weights)
        for g in groups.values():
            g["weights"] = np.stack(g["weights"])  # (n_states_in_group, n_w, n_b)
        return list(groups.values())

    def _unit_grid(self, positions, group):
        return unit_power_grid(
            np.ascontiguousarray(positions, dtype=float),
            group["omega"], group["wavenumber"], group["added"],
            group["damping"], group["excitation"], group["beta"],
            self.spec.mass, self.spec.pto_stiffness, self.spec.pto_damping,
            self.coupling.attenuation_scale if self.coupling.couple else 0.0,
            self.coupling.couple,
        )

    def _canonical_state_matrix(self, positions):
        """Per-state, per-buoy powers in canonical (sorted) buoy order.

        Sorting the positions before the kernel makes every downstream
        reduction independent of the caller's buoy ordering, so annual
        power is permutation invariant bit for bit.
        """
        pos = np.asarray(positions, dtype=float).reshape(-1, 2)
        if pos.shape[0] < 1:
            raise InvalidLayoutError("layout needs at least one buoy")
        if not np.all(np.isfinite(pos)):
            raise InvalidLayoutError("layout contains non-finite positions")
        order = np.lexsort((pos[:, 1], pos[:, 0]))
        inverse = np.argsort(order)

        n_states = len(self.climate.states)
        out = np.empty((n_states, pos.shape[0]))
        for group in self._groups:
            grid = self._unit_grid(pos[order], group)  # (n_w, n_b, n)
            out[group["state_indices"]] = np.einsum("swb,wbn->sn", group["weights"], grid)
        return out, inverse

    def per_buoy_state_powers(self, positions) -> np.ndarray:
        """(n_states, n_buoys) matrix of per-state, per-buoy powers."""
        matrix, inverse = self._canonical_state_matrix(positions)
        return matrix[:, inverse]

    def state_powers(self, positions) -> np.ndarray:
        """Farm power P(Hs, Tp) for every sea state of the climate."""
        matrix, _ = self._canonical_state_matrix(positions)
        return matrix.sum(axis=1)

    def per_buoy_annual(self, positions) -> np.ndarray:
        return self.occurrences @ self.per_buoy_state_powers(positions)

    def annual_power(self, positions) -> float:
        """The optimization objective: sum over states of P(Hs,Tp) O(Hs,Tp)."""
        return float(self.occurrences @ self.state_powers(positions))

    @property
    def isolated_power(self) -> float:
        """Annual power of one buoy alone; cached, position independent."""
        if self._isolated is None:
            self._isolated = self.annual_power(np.zeros((1, 2)))
        return self._isolated

    def q_factor(self, positions) -> float:
        pos = np.asarray(positions, dtype=float).reshape(-1, 2)
        farm = self.annual_power(pos)
        if pos.shape[0] == 1:
            # A one-buoy farm *is* the isolated buoy; the ratio is exact.
            if farm == 0.0:
                raise UndefinedQError("isolated-buoy power is zero")
            return farm / farm
        denom = pos.shape[0] * self.isolated_power
        if denom == 0.0:
            raise UndefinedQError("isolated-buoy power is zero")
        return farm / denom


def power_sea_state(positions, spec: BuoySpec, table: HydroTable, state,
                    coupling: Coupling = Coupling()) -> float:
    """Farm power in one sea state: quadrature of S(w,b) p(w,b) dw db."""
    from ..climate import WaveClimate
    climate = WaveClimate(((state, 1.0),), state.beta0, state.spread)
    return float(PowerEvaluator(spec, table, climate, coupling).state_powers(positions)[0])


def annual_power(positions, spec: BuoySpec, table: HydroTable, climate,
                 coupling: Coupling = Coupling()) -> float:
    return PowerEvaluator(spec, table, climate, coupling).annual_power(positions)


def q_factor(positions, spec: BuoySpec, table: HydroTable, climate,
             coupling: Coupling = Coupling()) -> float:
    return PowerEvaluator(spec, table, climate, coupling).q_factor(positions)
