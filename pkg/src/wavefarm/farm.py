"""Layout geometry, safety-distance constraints and repair.

Buoys live in a square farm of side sqrt(N * 20000) metres (20000 m^2 of
area per buoy) and must keep at least 50 m apart.  Violations are
measured as the summed shortfall below 50 m over all offending pairs and
penalised steeply; repair minimizes that penalty with the simplex module
over the offending buoys only, never touching the power model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidLayoutError
from .simplex import SimplexConfig, minimize

AREA_PER_BUOY = 20000.0  # m^2
SAFE_DISTANCE = 50.0     # m
PENALTY_EXPONENT = 20

REPAIR_ITERS_PER_DIM = 200
REPAIR_EDGE = 10.0       # initial simplex edge, m
JITTER = 0.1             # m, separates coincident buoys before repair


def farm_side(n_buoys: int) -> float:
    """Side length of the square farm allocated to n buoys."""
    if n_buoys < 1:
        raise InvalidLayoutError("farm must hold at least one buoy")
    return float(np.sqrt(n_buoys * AREA_PER_BUOY))


@dataclass(frozen=True)
class Layout:
    """Ordered buoy positions inside a square farm of the given side."""

    positions: np.ndarray
    side: float

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "positions", pos)
        if self.side <= 0:
            raise InvalidLayoutError("farm side must be positive")
        if not np.all(np.isfinite(pos)):
            raise InvalidLayoutError("layout contains non-finite positions")

    @property
    def n_buoys(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class ViolationReport:
    """Summed pairwise shortfall below the safety distance."""

    sum_dist: float
    violating_pairs: list = field(default_factory=list)  # (i, j, shortfall)

    def __post_init__(self):
        assert self.sum_dist >= 0


def pairwise_distances(positions: np.ndarray) -> np.ndarray:
    delta = positions[:, None, :] - positions[None, :, :]
    return np.hypot(delta[..., 0], delta[..., 1])


def measure_violations(positions) -> ViolationReport:
    """Sum of (50 - dist) over all pairs closer than 50 m."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    dist = pairwise_distances(pos)
    iu, ju = np.triu_indices(pos.shape[0], k=1)
    short = SAFE_DISTANCE - dist[iu, ju]
    mask = short > 0
    pairs = [(int(i), int(j), float(s))
             for i, j, s in zip(iu[mask], ju[mask], short[mask])]
    return ViolationReport(float(short[mask].sum()) if mask.any() else 0.0, pairs)


def violation_sum(positions) -> float:
    """Cheap scalar version of measure_violations for inner loops."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    dist = pairwise_distances(pos)
    iu, ju = np.triu_indices(pos.shape[0], k=1)
    short = SAFE_DISTANCE - dist[iu, ju]
    return float(short[short > 0].sum())


def penalty(sum_dist: float) -> float:
    """(sum_dist + 1)^20; equals 1 exactly for a feasible layout."""
    return float((sum_dist + 1.0) ** PENALTY_EXPONENT)


def clamp_to_farm(positions, side: float) -> np.ndarray:
    """Clip every coordinate into [0, side]."""
    return np.clip(np.asarray(positions, dtype=float).reshape(-1, 2), 0.0, side)


def is_feasible(positions, side: float) -> bool:
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    if np.any(pos < 0) or np.any(pos > side):
        return False
    return violation_sum(pos) == 0.0


def repair(positions, side: float, rng) -> tuple[np.ndarray, bool]:
    """Move distance-violating buoys until the layout is feasible.

    Only the buoys named in the violation report are free variables;
    everything else stays frozen.  Returns (layout, feasible).  When the
    simplex search cannot reach zero violation within its iteration cap
    the original geometry is returned (clamped) with feasible=False so
    the caller can reject the candidate.
    """
    pos = clamp_to_farm(positions, side)
    report = measure_violations(pos)
    if report.sum_dist == 0.0:
        return pos, True

    # Coincident buoys give the simplex a flat start; split them apart
    # deterministically through the caller's rng.
    for i, j, short in report.violating_pairs:
        if short >= SAFE_DISTANCE:  # dist == 0
            angle = rng.uniform(0.0, 2.0 * np.pi)
            offset = JITTER * np.array([np.cos(angle), np.sin(angle)])
            pos[j] = np.clip(pos[j] + offset, 0.0, side)
    report = measure_violations(pos)
    if report.sum_dist == 0.0:
        return pos, True

    movers = sorted({i for i, j, _ in report.violating_pairs}
                    | {j for i, j, _ in report.violating_pairs})
    movers = np.array(movers, dtype=int)
    frozen = pos.copy()

    def objective(flat):
        candidate = frozen.copy()
        candidate[movers] = flat.reshape(-1, 2)
        return penalty(violation_sum(candidate))

    dims = 2 * movers.size
    cfg = SimplexConfig(initial_edge=REPAIR_EDGE,
                        max_iters=REPAIR_ITERS_PER_DIM * dims,
                        stop_below=1.0)
    best, value = minimize(objective, pos[movers].ravel(),
                           (np.zeros(dims), np.full(dims, side)), cfg, rng)
    repaired = frozen.copy()
    repaired[movers] = best.reshape(-1, 2)
    repaired = clamp_to_farm(repaired, side)
    if violation_sum(repaired) == 0.0:
        return repaired, True
    return pos, False


def save_layout(path, positions, side: float) -> None:
    """Write the layout exchange file: farm_size_m plus positions."""
    payload = {"farm_size_m": float(side),
               "positions": [[float(x), float(y)] for x, y in np.asarray(positions).reshape(-1, 2)]}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_layout(path) -> Layout:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        side = float(payload["farm_size_m"])
        positions = np.asarray(payload["positions"], dtype=float).reshape(-1, 2)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidLayoutError(f"malformed layout file {path}: {exc}") from exc
    return Layout(positions, side)
