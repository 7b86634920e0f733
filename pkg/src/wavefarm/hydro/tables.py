"""Single-buoy hydrodynamic coefficient tables.

A table holds, per angular frequency and per degree of freedom (surge,
sway, heave), the diagonal added mass, the diagonal radiation damping and
the excitation-force magnitude for a unit-amplitude incident wave.  The
bundled default table is a documented closed-form placeholder; any table
in the CSV format below can replace it.

CSV format: header ``omega,dof,added_mass,damping,excitation`` with one
row per (omega, dof) pair, dof in {0, 1, 2}.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ..errors import ExtrapolationError

RHO = 1025.0  # sea water density, kg/m^3
GRAVITY = 9.81  # m/s^2

N_DOF = 3


@dataclass(frozen=True)
class HydroTable:
    """Per-frequency single-buoy coefficients, one column per DOF.

    Attributes
    ----------
    frequencies : ndarray, shape (n,)
        Angular frequencies in rad/s, strictly increasing, all positive.
    added_mass : ndarray, shape (n, 3)
        Diagonal added mass per DOF, kg.
    damping : ndarray, shape (n, 3)
        Diagonal radiation damping per DOF, kg/s, non-negative.
    excitation : ndarray, shape (n, 3)
        Excitation-force magnitude per DOF, N per metre of wave amplitude.
    """

    frequencies: np.ndarray
    added_mass: np.ndarray
    damping: np.ndarray
    excitation: np.ndarray

    def __post_init__(self):
        freq = np.asarray(self.frequencies, dtype=float)
        object.__setattr__(self, "frequencies", freq)
        for name in ("added_mass", "damping", "excitation"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim == 1:
                arr = np.repeat(arr[:, None], N_DOF, axis=1)
            object.__setattr__(self, name, arr)
        if freq.ndim != 1 or freq.size < 2:
            raise ValueError("table needs at least two frequency samples")
        if np.any(freq <= 0) or np.any(np.diff(freq) <= 0):
            raise ValueError("frequencies must be strictly increasing and positive")
        for name in ("added_mass", "damping", "excitation"):
            arr = getattr(self, name)
            if arr.shape != (freq.size, N_DOF):
                raise ValueError(f"{name} must have shape (n_frequencies, {N_DOF})")
        if np.any(self.damping < 0):
            raise ValueError("damping must be non-negative at every frequency")

    @property
    def omega_min(self) -> float:
        return float(self.frequencies[0])

    @property
    def omega_max(self) -> float:
        return float(self.frequencies[-1])

    def interpolate(self, omega) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Linear interpolation of (added_mass, damping, excitation) at omega.

        omega may be a scalar or an array; values outside the tabulated
        range raise ExtrapolationError.  Returns arrays of shape
        (..., 3).
        """
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        if np.any(w < self.omega_min) or np.any(w > self.omega_max):
            raise ExtrapolationError(
                f"frequency outside table range [{self.omega_min}, {self.omega_max}] rad/s"
            )
        out = []
        for arr in (self.added_mass, self.damping, self.excitation):
            cols = [np.interp(w, self.frequencies, arr[:, d]) for d in range(N_DOF)]
            out.append(np.stack(cols, axis=-1))
        if np.isscalar(omega):
            return tuple(o[0] for o in out)
        return tuple(out)


@dataclass(frozen=True)
class BuoySpec:
    """Physical buoy and PTO description shared by every buoy in a farm.

    pto_stiffness and pto_damping are per-DOF constants (length-3 arrays).
    """

    radius: float = 5.0
    mass: float = RHO * (4.0 / 3.0) * np.pi * 5.0**3
    submergence_depth: float = 3.0
    pto_stiffness: np.ndarray = field(default_factory=lambda: np.full(N_DOF, 3.0e5))
    pto_damping: np.ndarray = field(default_factory=lambda: np.full(N_DOF, 9.0e4))

    def __post_init__(self):
        for name in ("pto_stiffness", "pto_damping"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim == 0:
                arr = np.full(N_DOF, float(arr))
            object.__setattr__(self, name, arr)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if np.any(self.pto_damping < 0):
            raise ValueError("PTO damping must be non-negative")


# Placeholder coefficient curves for the bundled table.  Added mass is the
# infinite-fluid value for a translating sphere, constant in frequency.
# Damping is a smooth unimodal curve peaking at ka = 1, excitation decays
# from a fraction of the displaced weight.  The scale constants are tuned
# so a single default buoy absorbs on the order of 1e5 W in the bundled
# climates; they carry no further meaning.
_DAMPING_PEAK = 1.6e5  # kg/s
_EXCITATION_SCALE = 0.03  # fraction of displaced weight per metre amplitude


def default_hydro_table(radius: float = 5.0, n_frequencies: int = 40,
                        omega_min: float = 0.25, omega_max: float = 2.1) -> HydroTable:
    """Build the bundled closed-form placeholder table for a sphere.

    All three DOFs share the same curves.  Deep-water dispersion
    k = omega^2 / g is used throughout.
    """
    w = np.linspace(omega_min, omega_max, n_frequencies)
    volume = (4.0 / 3.0) * np.pi * radius**3
    ka = w**2 / GRAVITY * radius
    added = np.full_like(w, (2.0 / 3.0) * np.pi * RHO * radius**3)
    damping = _DAMPING_PEAK * (ka * np.exp(1.0 - ka)) ** 2
    excitation = _EXCITATION_SCALE * RHO * GRAVITY * volume * np.exp(-0.5 * ka**2)
    cols = lambda v: np.repeat(v[:, None], N_DOF, axis=1)
    return HydroTable(w, cols(added), cols(damping), cols(excitation))


def default_buoy_spec(table: HydroTable, modal_frequency: float,
                      radius: float = 5.0) -> BuoySpec:
    """Buoy spec with PTO constants matched to a climate's modal frequency.

    The PTO damping equals the radiation damping at the modal frequency
    (impedance-matching heuristic) and the stiffness tunes the natural
    frequency to the same point: K = w_m^2 (m + A(w_m)).
    """
    added, damping, _ = table.interpolate(modal_frequency)
    mass = RHO * (4.0 / 3.0) * np.pi * radius**3
    stiffness = modal_frequency**2 * (mass + added)
    return BuoySpec(radius=radius, mass=mass,
                    pto_stiffness=stiffness, pto_damping=damping.copy())


def save_table_csv(table: HydroTable, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega", "dof", "added_mass", "damping", "excitation"])
        for i, w in enumerate(table.frequencies):
            for d in range(N_DOF):
                writer.writerow([repr(float(w)), d,
                                 repr(float(table.added_mass[i, d])),
                                 repr(float(table.damping[i, d])),
                                 repr(float(table.excitation[i, d]))])


def load_table_csv(path) -> HydroTable:
    """Parse a coefficient table CSV; see the module docstring for the format."""
    rows: dict[float, dict[int, tuple[float, float, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"omega", "dof", "added_mass", "damping", "excitation"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"table CSV must have header columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                w = float(row["omega"])
                dof = int(row["dof"])
                vals = (float(row["added_mass"]), float(row["damping"]),
                        float(row["excitation"]))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"malformed table row at line {lineno}: {exc}") from exc
            if dof not in (0, 1, 2):
                raise ValueError(f"dof must be 0, 1 or 2 at line {lineno}")
            rows.setdefault(w, {})[dof] = vals
    freqs = sorted(rows)
    added = np.zeros((len(freqs), N_DOF))
    damping = np.zeros_like(added)
    excitation = np.zeros_like(added)
    for i, w in enumerate(freqs):
        if set(rows[w]) != {0, 1, 2}:
            raise ValueError(f"frequency {w} is missing rows for some DOFs")
        for d in range(N_DOF):
            added[i, d], damping[i, d], excitation[i, d] = rows[w][d]
    return HydroTable(np.asarray(freqs), added, damping, excitation)
