"""Multi-strategy hybrid search.

Pipeline: a small sub-layout is optimized in isolation by symmetric local
search plus simplex refinement; the farm is tiled at the sub-layout size;
a binary optimizer searches which tiles to occupy, seeded with random
mosaics of the optimized tile (smart initialization) and perturbed by a
rigid 45-degree rotation operator on the generation best; finally the
best mosaic is polished by discrete local search (grid steps) and a
continuous local search with shrinking normal steps.

The SLSNM-* variants stop after the binary stage; the MS-* variants run
all three stages with stage budgets at the configured fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExhausted, InfeasibleTileError, InvalidParamsError
from ..farm import AREA_PER_BUOY, SAFE_DISTANCE, clamp_to_farm, violation_sum
from ..simplex import SimplexConfig, minimize
from .common import (Budget, EAParams, LayoutProblem, ObjectiveTracker,
                     improvement_rate)
from .continuous import cls_loop, place_buoy_lsnm
from .discrete import (BinaryPopulation, PSOState, bde_step, bga_step,
                       bpso_step, dls_loop, pso_inertia)

TILE_MARGIN = 25.0  # m; keeps buoys of adjacent tiles >= 50 m apart
ROTATION_ANGLES = (45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0)

STAGE1_IMPORATE = 1e-3   # 0.1%
STAGE2_IMPORATE = 1e-5   # 0.001%


@dataclass(frozen=True)
class SubLayout:
    """Optimized buoy offsets inside one square tile, with its power."""

    offsets: np.ndarray   # (n_s, 2), tile-local coordinates
    tile_side: float
    power: float


@dataclass(frozen=True)
class TileGrid:
    """Axis-aligned tiling of the farm by sub-layout cells."""

    farm_side: float
    tiles_per_side: int

    @property
    def tile_side(self) -> float:
        return self.farm_side / self.tiles_per_side

    @property
    def n_tiles(self) -> int:
        return self.tiles_per_side ** 2

    def origin(self, tile: int) -> np.ndarray:
        row, col = divmod(int(tile), self.tiles_per_side)
        return np.array([col * self.tile_side, row * self.tile_side])

    def center(self, tile: int) -> np.ndarray:
        return self.origin(tile) + self.tile_side / 2.0


def build_tile_grid(side: float, n_occupied: int, n_s: int) -> TileGrid:
    """Tile the farm with cells sized near the sub-layout's native area.

    tiles_per_side = floor(side / sqrt(n_s * 20000)), raised so the grid
    holds more tiles than occupied slots (ceil(sqrt(n_b)) + 1 per side).
    Under-filled mosaics let the binary stage spread the sub-layouts
    apart, which decorrelates the tile pattern's periodic interference;
    a grid with every tile occupied has a single possible genome and
    would leave the rotation operator as the only stage-1 search.
    """
    native = math.sqrt(n_s * AREA_PER_BUOY)
    per_side = max(int(side // native), math.ceil(math.sqrt(n_occupied)) + 1)
    grid = TileGrid(side, per_side)
    if grid.tile_side < 2.0 * TILE_MARGIN + SAFE_DISTANCE:
        raise InfeasibleTileError(
            f"tile side {grid.tile_side:.1f} m cannot hold a sub-layout")
    return grid


def _margin_box(tile_side: float):
    return (np.full(2, TILE_MARGIN), np.full(2, tile_side - TILE_MARGIN))


def _upwave_start(tile_side: float, direction: float) -> np.ndarray:
    """Deterministic first placement: the midpoint of the tile edge whose
    outward normal points most nearly up-wave (against the propagation
    direction), pulled onto the margin box."""
    upwave = -np.array([np.cos(direction), np.sin(direction)])
    half = tile_side / 2.0
    inset = half - TILE_MARGIN
    center = np.full(2, half)
    normals = np.array([(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)])
    edge = int(np.argmax(normals @ upwave))
    return center + normals[edge] * inset


def sls_nm_surrogate(tracker: ObjectiveTracker, tile_side: float, n_s: int,
                     direction: float, params: EAParams, rng) -> SubLayout:
    """Build the surrogate sub-layout one buoy at a time.

    Each new buoy is the best of symmetric samples around the previous
    one (eight angles mirrored about the dominant wave direction, taken
    on rings whose radius starts at the safety distance and grows), then
    simplex-refined with the already placed buoys frozen.  All candidate
    offsets stay inside the tile margin box so a mosaic of tiles is
    feasible by construction.
    """
    lo, hi = _margin_box(tile_side)
    offsets = (-157.5, -112.5, -67.5, -22.5, 22.5, 67.5, 112.5, 157.5)

    def feasible(point, placed):
        if not placed:
            return True
        d = np.hypot(*(np.array(placed) - point).T)
        return bool(np.all(d >= SAFE_DISTANCE))

    if n_s == 1:
        point = np.full(2, tile_side / 2.0)
        power = tracker.evaluate(point[None, :])
        return SubLayout(point[None, :].copy(), tile_side, power)

    placed = [np.clip(_upwave_start(tile_side, direction), lo, hi)]
    power = tracker.evaluate(np.array(placed))

    base_rings = (1.0, 1.5, 2.25, 3.375)  # times the safety distance
    for _ in range(1, n_s):
        best_point, best_power = None, -np.inf
        grow = 1.0
        for _attempt in range(3):
            for ring in base_rings:
                radius = SAFE_DISTANCE * ring * grow
                for off in offsets:
                    angle = direction + np.deg2rad(off)
                    point = np.clip(placed[-1] + radius * np.array([np.cos(angle),
                                                                    np.sin(angle)]),
                                    lo, hi)
                    if not feasible(point, placed):
                        tracker.log_skip()
                        continue
                    p = tracker.evaluate(np.vstack([placed, point]))
                    if p > best_power:
                        best_point, best_power = point, p
            if best_point is not None:
                break
            grow *= 1.5
        if best_point is None:
            raise InfeasibleTileError(
                f"no feasible sample for buoy {len(placed) + 1} in the tile")

        frozen = np.array(placed)

        def negated(point):
            if not feasible(point, placed):
                return np.inf
            return -tracker.evaluate(np.vstack([frozen, point]))

        cfg = SimplexConfig(initial_edge=25.0, max_iters=params.ls_nm_iters)
        refined, value = minimize(negated, best_point, (lo, hi), cfg, rng)
        placed.append(refined)
        power = -value

    return SubLayout(np.array(placed), tile_side, power)


def smart_init(tile: SubLayout, grid: TileGrid, n_occupied: int, lam: int,
               rng) -> np.ndarray:
    """lam genomes, each occupying n_occupied random tiles of the grid."""
    if n_occupied > grid.n_tiles:
        raise InvalidParamsError("more occupied tiles requested than exist")
    genomes = np.zeros((lam, grid.n_tiles), dtype=np.uint8)
    for i in range(lam):
        genomes[i, rng.choice(grid.n_tiles, size=n_occupied, replace=False)] = 1
    return genomes


def decode_tiles(genome: np.ndarray, tile: SubLayout, grid: TileGrid) -> np.ndarray:
    """Stamp the sub-layout into every occupied tile, ascending tile order."""
    occupied = np.flatnonzero(genome)
    return np.vstack([grid.origin(t) + tile.offsets for t in occupied])


def rotate_sublayout(positions: np.ndarray, buoy_indices, center, angle_deg: float,
                     side: float):
    """Rigidly rotate one tile's buoys clockwise about the tile center.

    The result is clamped to the farm and distance-checked against the
    whole layout; an infeasible rotation is discarded and the original
    returned with applied=False.
    """
    theta = np.deg2rad(angle_deg)
    c, s = np.cos(theta), np.sin(theta)
    rotated = positions.copy()
    rel = positions[buoy_indices] - center
    rotated[buoy_indices] = np.column_stack(
        (c * rel[:, 0] + s * rel[:, 1], -s * rel[:, 0] + c * rel[:, 1])) + center
    rotated = clamp_to_farm(rotated, side)
    if violation_sum(rotated) > 0.0:
        return positions, False
    return rotated, True


def rotation_pass(positions: np.ndarray, genome: np.ndarray, tile: SubLayout,
                  grid: TileGrid, rng, side: float):
    """Rotate each occupied tile with probability 1/N_b by a random
    multiple of 45 degrees; infeasible tile rotations are skipped."""
    occupied = np.flatnonzero(genome)
    n_b = occupied.size
    n_s = tile.offsets.shape[0]
    out = positions
    changed = False
    for slot, t in enumerate(occupied):
        if rng.random() >= 1.0 / n_b:
            continue
        angle = ROTATION_ANGLES[rng.integers(len(ROTATION_ANGLES))]
        idx = np.arange(slot * n_s, (slot + 1) * n_s)
        out, applied = rotate_sublayout(out, idx, grid.center(t), angle, side)
        changed = changed or applied
    return out, changed


def _hybrid_run(problem: LayoutProblem, budget: Budget, params: EAParams, rng,
                binary_variant: str, backtracking: bool, label: str):
    steps = {"bGA": bga_step, "bDE": bde_step, "bPSO": bpso_step}
    if binary_variant not in steps:
        raise InvalidParamsError(f"unknown binary variant {binary_variant!r}")
    n, side = problem.n_buoys, problem.side
    n_s = params.sublayout_size
    if n < n_s:
        raise InvalidParamsError(
            f"hybrids need at least one full {n_s}-buoy sub-layout")
    n_b, remainder = divmod(n, n_s)
    grid = build_tile_grid(side, n_b, n_s)
    tracker = ObjectiveTracker(problem, budget)

    # LS-NM completion of remainder buoys needs headroom at the end.
    reserve = remainder * (params.ls_samples + params.ls_nm_iters + 8) + 1 if remainder else 0
    stage1_cap = budget.max_evaluations - reserve
    if backtracking:
        stage1_cap = min(stage1_cap, budget.stage_cap(1))

    lam = params.population
    current = None  # (positions, power) of the best full-size layout so far
    pop = None
    try:
        tracker.set_stage("surrogate")
        tile = sls_nm_surrogate(tracker, grid.tile_side, n_s,
                                problem.dominant_direction, params, rng)

        tracker.set_stage("binary")

        def evaluate_genome(genome):
            layout = decode_tiles(genome, tile, grid)
            return layout, tracker.evaluate(layout)

        genomes = smart_init(tile, grid, n_b, lam, rng)
        layouts, fitness = [], []
        for g in genomes:
            layout, power = evaluate_genome(g)
            layouts.append(layout)
            fitness.append(power)
        pop = BinaryPopulation(genomes, layouts, np.array(fitness))
        state = PSOState.from_population(pop) if binary_variant == "bPSO" else None

        g_max = max(1, (budget.max_evaluations - tracker.evaluations) // lam)
        history = [float(pop.fitness.max())]
        generation = 0
        stalled = 0
        # With every tile occupied there is exactly one genome, so the
        # population operators cannot move; the stage runs the rotation
        # operator alone instead of re-evaluating clones.
        degenerate = grid.n_tiles == n_b
        while tracker.remaining > 0 and tracker.evaluations < stage1_cap:
            generation += 1
            spent_before = tracker.evaluations
            if not degenerate:
                if binary_variant == "bPSO":
                    inertia = pso_inertia(params, generation - 1, g_max)
                    state, pop = bpso_step(state, pop, evaluate_genome, params,
                                           rng, inertia)
                else:
                    pop = steps[binary_variant](pop, evaluate_genome, params, rng)

            # Rotation operator on the generation best; the rotated layout
            # replaces that member's phenotype only when strictly better.
            idx = pop.best_index
            rotated, moved = rotation_pass(pop.layouts[idx], pop.genomes[idx],
                                           tile, grid, rng, side)
            if moved and tracker.remaining > 0 and tracker.evaluations < stage1_cap:
                power = tracker.evaluate(rotated)
                if power > pop.fitness[idx]:
                    pop.layouts[idx] = rotated
                    pop.fitness[idx] = float(power)
                    if state is not None and power > state.gbest_fitness:
                        state.gbest_fitness = float(power)
                        state.gbest_layout = rotated
                        state.gbest_genome = pop.genomes[idx].copy()

            history.append(float(pop.fitness.max()))
            rate = improvement_rate(history)
            tracker.log_generation(generation, history[-1], rate)
            if backtracking and rate is not None and rate < STAGE1_IMPORATE:
                break
            if tracker.evaluations == spent_before:
                stalled += 1
                if stalled > 2000:  # nothing left that can spend budget
                    break
            else:
                stalled = 0
    except BudgetExhausted:
        pass

    if pop is not None:
        idx = pop.best_index
        if binary_variant == "bPSO" and state is not None \
                and state.gbest_fitness >= pop.fitness[idx]:
            current = (np.array(state.gbest_layout), float(state.gbest_fitness))
        else:
            current = (np.array(pop.layouts[idx]), float(pop.fitness[idx]))

    if current is not None and remainder:
        tracker.set_stage("fill")
        placed = [p for p in current[0]]
        power = current[1]
        try:
            while len(placed) < n:
                point, power = place_buoy_lsnm(tracker, placed, side, params, rng)
                placed.append(np.asarray(point))
        except BudgetExhausted:
            pass
        if len(placed) == n:
            current = (np.array(placed), power)

    if backtracking and current is not None and current[0].shape[0] == n:
        tracker.set_stage("dls")
        positions, power = dls_loop(tracker, current[0], current[1],
                                    params.grid_spacing, rng, "I",
                                    eval_cap=budget.stage_cap(2),
                                    imporate_threshold=STAGE2_IMPORATE,
                                    generation_size=lam)
        tracker.set_stage("cls")
        positions, power = cls_loop(tracker, positions, power, rng,
                                    allotted=tracker.remaining)
        current = (positions, power)

    # Robust finalization: fall back to the best evaluated full layout,
    # completing on the safety grid only if the budget died before one
    # full-size evaluation happened.
    if current is None or current[0].shape[0] != n:
        if tracker.best_full_positions is not None:
            current = (tracker.best_full_positions, tracker.best_full_power)
        else:
            from .continuous import _grid_fill
            base = [] if current is None else [p for p in current[0]]
            filled = np.array(_grid_fill(base, n, side))
            try:
                power = tracker.evaluate(filled)
            except BudgetExhausted:
                power = tracker.evaluate_uncounted(filled)
            current = (filled, power)

    return tracker.finalize(label, 0, current[0], current[1], 0.0)


def ms_run(problem: LayoutProblem, budget: Budget, params: EAParams, rng,
           variant: str = "bDE") -> "RunRecord":
    """Full multi-strategy run: binary stage, then DLS and CLS backtracking."""
    return _hybrid_run(problem, budget, params, rng, variant, True, f"MS-{variant}")


def slsnm_hybrid_run(problem: LayoutProblem, budget: Budget, params: EAParams,
                     rng, variant: str = "bGA") -> "RunRecord":
    """Binary stage only, spending the whole budget there."""
    return _hybrid_run(problem, budget, params, rng, variant, False,
                       f"SLSNM-{variant}")
