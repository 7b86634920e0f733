"""Wave climates: discretized directional spectra and occurrence tables.

A sea state carries a spectrum grid S(omega, beta) sampled at midpoint
frequency nodes and equally spaced direction nodes.  The frequency shape
is Bretschneider, the spreading is a cos^(2s) half-angle model normalized
numerically over the direction grid.  A climate is a list of sea states
with occurrence probabilities summing to one.

Climate CSV format: header ``hs,tp,beta0,spread,occurrence`` with one row
per sea state.
"""

from __future__ import annotations

from dataclasses import dataclass

import csv
import numpy as np

from .errors import InvalidClimateError

OMEGA_RANGE = (0.3, 2.0)  # default spectral grid support, rad/s
N_OMEGA = 20
N_BETA = 12

OCCURRENCE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SeaState:
    """One (Hs, Tp) sea state with its discretized directional spectrum."""

    hs: float
    tp: float
    beta0: float            # mean propagation direction, rad
    spread: float           # cos^(2s) spreading exponent
    omega: np.ndarray       # (n_w,) frequency nodes
    beta: np.ndarray        # (n_b,) direction nodes
    spectrum: np.ndarray    # (n_w, n_b) spectral density S(omega, beta)
    d_omega: float
    d_beta: float

    def __post_init__(self):
        if self.hs <= 0 or self.tp <= 0:
            raise InvalidClimateError("Hs and Tp must be positive")
        if self.omega.size == 0 or self.beta.size == 0:
            raise InvalidClimateError("spectrum grid may not be empty")
        if np.any(self.spectrum < 0):
            raise InvalidClimateError("spectral density must be non-negative")

    @property
    def node_weights(self) -> np.ndarray:
        """Quadrature weights S * d_omega * d_beta on the (omega, beta) grid."""
        return self.spectrum * (self.d_omega * self.d_beta)


@dataclass(frozen=True)
class WaveClimate:
    """Sea states with occurrence probabilities plus site-level direction info."""

    states: tuple            # of (SeaState, occurrence) pairs
    dominant_direction: float
    spreading: float
    name: str = "custom"

    def __post_init__(self):
        occ = np.array([o for _, o in self.states], dtype=float)
        if occ.size == 0:
            raise InvalidClimateError("climate has no sea states")
        if np.any(occ < 0):
            raise InvalidClimateError("occurrence probabilities must be non-negative")
        total = float(occ.sum())
        if abs(total - 1.0) > OCCURRENCE_TOLERANCE:
            raise InvalidClimateError(
                f"occurrence probabilities sum to {total!r}, expected 1 within "
                f"{OCCURRENCE_TOLERANCE} (off by {total - 1.0:+.3e})"
            )

    @property
    def occurrences(self) -> np.ndarray:
        return np.array([o for _, o in self.states], dtype=float)

    def modal_frequency(self) -> float:
        """Frequency node carrying the largest occurrence-weighted energy."""
        acc: dict[float, float] = {}
        for state, occ in self.states:
            energy = state.node_weights.sum(axis=1)
            for w, e in zip(state.omega, energy):
                acc[float(w)] = acc.get(float(w), 0.0) + occ * float(e)
        return max(acc, key=acc.get)


def bretschneider(omega: np.ndarray, hs: float, tp: float) -> np.ndarray:
    """Bretschneider spectral density, integrates to Hs^2/16 over omega."""
    wp = 2.0 * np.pi / tp
    w = np.asarray(omega, dtype=float)
    return (5.0 / 16.0) * hs**2 * wp**4 / w**5 * np.exp(-1.25 * (wp / w) ** 4)


def build_spectrum(hs: float, tp: float, beta0: float, spread: float,
                   n_omega: int = N_OMEGA, n_beta: int = N_BETA,
                   omega_range: tuple[float, float] = OMEGA_RANGE) -> SeaState:
    """Discretize a (Hs, Tp) sea state into a directional spectrum grid.

    The frequency axis uses midpoint nodes on omega_range so the spectrum
    quadrature approximates the analytic Hs^2/16 integral.  The spreading
    D(beta) proportional to cos^(2 spread)((beta - beta0)/2) is normalized
    numerically so sum(D) * d_beta == 1.
    """
    if hs <= 0 or tp <= 0:
        raise InvalidClimateError("Hs and Tp must be positive")
    if spread <= 0:
        raise InvalidClimateError("spreading exponent must be positive")
    lo, hi = omega_range
    d_omega = (hi - lo) / n_omega
    omega = lo + (np.arange(n_omega) + 0.5) * d_omega
    d_beta = 2.0 * np.pi / n_beta
    beta = np.arange(n_beta) * d_beta

    s_f = bretschneider(omega, hs, tp)
    raw = np.abs(np.cos(0.5 * (beta - beta0))) ** (2.0 * spread)
    d_dir = raw / (raw.sum() * d_beta)
    return SeaState(hs=hs, tp=tp, beta0=beta0, spread=spread,
                    omega=omega, beta=beta,
                    spectrum=np.outer(s_f, d_dir), d_omega=d_omega, d_beta=d_beta)


# Synthetic stand-in climates.  The (Hs, Tp) sets keep the spectral peak
# well inside the default grid so the truncated quadrature stays within
# 1% of Hs^2/16.  Perth-like: one narrow swell sector.  Sydney-like: the
# same sea states arriving from three broadly spread sectors.
_SEA_STATES = ((2.0, 11.0, 0.45), (3.0, 12.0, 0.35), (4.5, 13.0, 0.20))
_PERTH_DIRECTION = 2.356194490192345  # 135 degrees
_PERTH_SPREAD = 25.0
_SYDNEY_DIRECTIONS = ((1.1780972450961724, 0.40),   # 67.5 degrees
                      (1.9634954084936207, 0.35),   # 112.5 degrees
                      (2.748893571891069, 0.25))    # 157.5 degrees
_SYDNEY_SPREAD = 2.0


def synthetic_climate(site: str, n_omega: int = N_OMEGA, n_beta: int = N_BETA) -> WaveClimate:
    """Build the bundled ``perth_like`` or ``sydney_like`` scenario."""
    if site == "perth_like":
        states = tuple(
            (build_spectrum(hs, tp, _PERTH_DIRECTION, _PERTH_SPREAD, n_omega, n_beta), occ)
            for hs, tp, occ in _SEA_STATES
        )
        return WaveClimate(states, _PERTH_DIRECTION, _PERTH_SPREAD, name=site)
    if site == "sydney_like":
        states = []
        for beta0, w_dir in _SYDNEY_DIRECTIONS:
            for hs, tp, occ in _SEA_STATES:
                states.append(
                    (build_spectrum(hs, tp, beta0, _SYDNEY_SPREAD, n_omega, n_beta),
                     occ * w_dir)
                )
        dominant = max(_SYDNEY_DIRECTIONS, key=lambda p: p[1])[0]
        return WaveClimate(tuple(states), dominant, _SYDNEY_SPREAD, name=site)
    raise InvalidClimateError(f"unknown synthetic site {site!r}")


def load_climate_csv(path, n_omega: int = N_OMEGA, n_beta: int = N_BETA) -> WaveClimate:
    """Read a climate CSV; rows become sea states in file order."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"hs", "tp", "beta0", "spread", "occurrence"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InvalidClimateError(
                f"climate CSV must have header columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append((float(row["hs"]), float(row["tp"]), float(row["beta0"]),
                             float(row["spread"]), float(row["occurrence"])))
            except (TypeError, ValueError) as exc:
                raise InvalidClimateError(
                    f"malformed climate row at line {lineno}: {exc}") from exc
    if not rows:
        raise InvalidClimateError("climate CSV contains no sea states")
    states = tuple(
        (build_spectrum(hs, tp, beta0, spread, n_omega, n_beta), occ)
        for hs, tp, beta0, spread, occ in rows
    )
    # The site-level direction/spread follow the highest-occurrence row.
    _, _, dominant, spread, _ = max(rows, key=lambda r: r[4])
    return WaveClimate(states, dominant, spread)


def save_climate_csv(climate: WaveClimate, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["hs", "tp", "beta0", "spread", "occurrence"])
        for state, occ in climate.states:
            writer.writerow([repr(float(state.hs)), repr(float(state.tp)),
                             repr(float(state.beta0)), repr(float(state.spread)),
                             repr(float(occ))])
