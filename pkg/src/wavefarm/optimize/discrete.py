"""Binary optimizers on the safety-distance grid: bGA, bDE, bPSO, DLS.

Genomes are 0/1 vectors over grid cells with an exact popcount equal to
the buoy count; every operator restores that constraint before a genome
is evaluated.  Decoded layouts are feasible by construction because the
grid spacing is the safety distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import BudgetExhausted, InvalidParamsError
from ..farm import SAFE_DISTANCE
from .common import (Budget, EAParams, LayoutProblem, ObjectiveTracker,
                     improvement_rate)


@dataclass(frozen=True)
class GridSpec:
    """Square cell grid covering the farm; cell index = row * cps + col."""

    side: float
    spacing: float = 50.0

    def __post_init__(self):
        if self.spacing <= 0 or self.side < self.spacing:
            raise InvalidParamsError("grid spacing must be positive and fit the farm")

    @property
    def cells_per_side(self) -> int:
        return int(self.side // self.spacing) + 1

    @property
    def n_cells(self) -> int:
        return self.cells_per_side ** 2

    def cell_positions(self, cells: np.ndarray) -> np.ndarray:
        cols = cells % self.cells_per_side
        rows = cells // self.cells_per_side
        return np.column_stack((cols * self.spacing, rows * self.spacing)).astype(float)


def decode(genome: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Occupied cells in ascending index order become buoy positions."""
    return grid.cell_positions(np.flatnonzero(genome))


def encode(positions, grid: GridSpec) -> np.ndarray:
    """Inverse of decode for grid-aligned layouts (nearest cell otherwise)."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    cols = np.clip(np.rint(pos[:, 0] / grid.spacing), 0, grid.cells_per_side - 1)
    rows = np.clip(np.rint(pos[:, 1] / grid.spacing), 0, grid.cells_per_side - 1)
    cells = (rows * grid.cells_per_side + cols).astype(int)
    if len(set(cells.tolist())) != len(cells):
        raise InvalidParamsError("two buoys map to the same grid cell")
    genome = np.zeros(grid.n_cells, dtype=np.uint8)
    genome[cells] = 1
    return genome


def enforce_popcount(genome: np.ndarray, target: int, rng) -> np.ndarray:
    """Flip uniformly chosen bits until the genome has exactly `target` ones."""
    out = genome.copy()
    ones = np.flatnonzero(out == 1)
    if ones.size > target:
        drop = rng.choice(ones, size=ones.size - target, replace=False)
        out[drop] = 0
    elif ones.size < target:
        zeros = np.flatnonzero(out == 0)
        raise_ = rng.choice(zeros, size=target - ones.size, replace=False)
        out[raise_] = 1
    return out


def random_genome(n_cells: int, popcount: int, rng) -> np.ndarray:
    genome = np.zeros(n_cells, dtype=np.uint8)
    genome[rng.choice(n_cells, size=popcount, replace=False)] = 1
    return genome


# --- population container -------------------------------------------------

@dataclass
class BinaryPopulation:
    """Genomes with their decoded layouts and fitness, kept consistent.

    The hybrid stage may overwrite a member's (layout, fitness) with a
    rotated phenotype while leaving the genome untouched; the operators
    below only read genomes and replace whole members.
    """

    genomes: np.ndarray            # (lambda, n_bits) uint8
    layouts: list                  # of (m, 2) arrays
    fitness: np.ndarray            # (lambda,)

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    @property
    def best_index(self) -> int:
        return int(np.argmax(self.fitness))


def init_population(lam: int, n_cells: int, popcount: int, evaluate_genome,
                    rng) -> BinaryPopulation:
    genomes, layouts, fitness = [], [], []
    for _ in range(lam):
        genome = random_genome(n_cells, popcount, rng)
        layout, power = evaluate_genome(genome)
        genomes.append(genome)
        layouts.append(layout)
        fitness.append(power)
    return BinaryPopulation(np.array(genomes), layouts, np.array(fitness))


# --- binary GA --------------------------------------------------------------

def double_point_crossover(a: np.ndarray, b: np.ndarray, rng):
    length = a.size
    i, j = sorted(rng.choice(length + 1, size=2, replace=False).tolist())
    child1, child2 = a.copy(), b.copy()
    child1[i:j], child2[i:j] = b[i:j], a[i:j]
    return child1, child2


def bga_step(pop: BinaryPopulation, evaluate_genome, params: EAParams,
             rng) -> BinaryPopulation:
    """One generation: elitism, tournament parents, double-point crossover,
    per-bit mutation at the mutation rate, popcount correction last.
    """
    lam = pop.size
    popcount = int(pop.genomes[0].sum())
    n_elite = max(1, round(params.elitism * lam))
    order = np.argsort(-pop.fitness, kind="stable")

    genomes = [pop.genomes[i].copy() for i in order[:n_elite]]
    layouts = [pop.layouts[i] for i in order[:n_elite]]
    fitness = [float(pop.fitness[i]) for i in order[:n_elite]]

    def tournament():
        i, j = rng.integers(lam, size=2)
        return pop.genomes[i] if pop.fitness[i] >= pop.fitness[j] else pop.genomes[j]

    children = []
    while len(children) < lam - n_elite:
        p1, p2 = tournament(), tournament()
        if rng.random() < params.crossover_rate:
            c1, c2 = double_point_crossover(p1, p2, rng)
        else:
            c1, c2 = p1.copy(), p2.copy()
        children.extend([c1, c2])
    children = children[: lam - n_elite]

    for child in children:
        flips = rng.random(child.size) < params.mutation_rate
        child = child.copy()
        child[flips] ^= 1
        child = enforce_popcount(child, popcount, rng)
        layout, power = evaluate_genome(child)
        genomes.append(child)
        layouts.append(layout)
        fitness.append(power)
    return BinaryPopulation(np.array(genomes), layouts, np.array(fitness))


# --- binary DE --------------------------------------------------------------

def bde_mutant(x_r1: np.ndarray, x_r2: np.ndarray, x_gbest: np.ndarray) -> np.ndarray:
    """Difference vector is x_r1 where the two parents disagree, zero
    elsewhere; the mutant takes ones from it and the global best otherwise.
    """
    diff = np.where(x_r1 == x_r2, 0, x_r1)
    return np.where(diff == 1, 1, x_gbest).astype(np.uint8)


def bde_step(pop: BinaryPopulation, evaluate_genome, params: EAParams,
             rng) -> BinaryPopulation:
    """One synchronous bDE generation with binomial crossover and greedy
    selection (maximization, ties replace)."""
    lam = pop.size
    popcount = int(pop.genomes[0].sum())
    n_bits = pop.genomes.shape[1]
    gbest = pop.genomes[pop.best_index]

    new = BinaryPopulation(pop.genomes.copy(), list(pop.layouts), pop.fitness.copy())
    for i in range(lam):
        others = [j for j in range(lam) if j != i]
        r1, r2 = rng.choice(others, size=2, replace=False)
        mutant = bde_mutant(pop.genomes[r1], pop.genomes[r2], gbest)
        cross = rng.random(n_bits) < params.p_cr
        cross[rng.integers(n_bits)] = True
        trial = np.where(cross, mutant, pop.genomes[i]).astype(np.uint8)
        trial = enforce_popcount(trial, popcount, rng)
        layout, power = evaluate_genome(trial)
        if power >= pop.fitness[i]:
            new.genomes[i] = trial
            new.layouts[i] = layout
            new.fitness[i] = power
    return new


# --- binary PSO -------------------------------------------------------------

def bpso_transfer(velocity):
    """V-shaped transfer: |2/pi * arctan(pi/2 * v)|, in [0, 1)."""
    return np.abs((2.0 / np.pi) * np.arctan((np.pi / 2.0) * np.asarray(velocity)))


@dataclass
class PSOState:
    velocities: np.ndarray         # (lambda, n_bits)
    pbest_genomes: np.ndarray
    pbest_layouts: list
    pbest_fitness: np.ndarray
    gbest_genome: np.ndarray = field(default=None)
    gbest_layout: np.ndarray = field(default=None)
    gbest_fitness: float = float("-inf")

    @classmethod
    def from_population(cls, pop: BinaryPopulation) -> "PSOState":
        state = cls(velocities=np.zeros(pop.genomes.shape),
                    pbest_genomes=pop.genomes.copy(),
                    pbest_layouts=list(pop.layouts),
                    pbest_fitness=pop.fitness.copy())
        best = pop.best_index
        state.gbest_genome = pop.genomes[best].copy()
        state.gbest_layout = pop.layouts[best]
        state.gbest_fitness = float(pop.fitness[best])
        return state

    def absorb(self, pop: BinaryPopulation) -> None:
        for i in range(pop.size):
            if pop.fitness[i] > self.pbest_fitness[i]:
                self.pbest_fitness[i] = pop.fitness[i]
                self.pbest_genomes[i] = pop.genomes[i].copy()
                self.pbest_layouts[i] = pop.layouts[i]
        best = pop.best_index
        if pop.fitness[best] > self.gbest_fitness:
            self.gbest_fitness = float(pop.fitness[best])
            self.gbest_genome = pop.genomes[best].copy()
            self.gbest_layout = pop.layouts[best]


def pso_inertia(params: EAParams, generation: int, max_generations: int) -> float:
    """Linear schedule from inertia_start down to inertia_end, optionally
    clipped into the configured window."""
    if max_generations <= 1:
        w = params.inertia_end
    else:
        frac = min(generation, max_generations - 1) / (max_generations - 1)
        w = params.inertia_start + (params.inertia_end - params.inertia_start) * frac
    if params.inertia_clamp is not None:
        lo, hi = params.inertia_clamp
        w = min(max(w, lo), hi)
    return w


def bpso_step(state: PSOState, pop: BinaryPopulation, evaluate_genome,
              params: EAParams, rng, inertia: float):
    """One swarm update: velocities, V-shaped flips, popcount correction.

    Every particle is re-evaluated each generation; the personal and
    global best archives carry elitism.
    """
    lam, n_bits = pop.genomes.shape
    popcount = int(pop.genomes[0].sum())
    new = BinaryPopulation(pop.genomes.copy(), list(pop.layouts), pop.fitness.copy())
    for i in range(lam):
        x = pop.genomes[i].astype(float)
        v = (inertia * state.velocities[i]
             + params.c1 * rng.random(n_bits) * (state.pbest_genomes[i] - x)
             + params.c2 * rng.random(n_bits) * (state.gbest_genome - x))
        np.clip(v, -params.velocity_clamp, params.velocity_clamp, out=v)
        state.velocities[i] = v
        flips = rng.random(n_bits) < bpso_transfer(v)
        genome = pop.genomes[i].copy()
        genome[flips] = 1 - genome[flips]  # (X)^-1 read as bit complement
        genome = enforce_popcount(genome, popcount, rng)
        layout, power = evaluate_genome(genome)
        new.genomes[i] = genome
        new.layouts[i] = layout
        new.fitness[i] = power
    state.absorb(new)
    return state, new


# --- discrete local search ---------------------------------------------------

_NEIGHBOR_STEPS = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)
                            if (dx, dy) != (0, 0)], dtype=float)


def _dls_feasible(point, others, side) -> bool:
    if point[0] < 0 or point[1] < 0 or point[0] > side or point[1] > side:
        return False
    if others.shape[0] == 0:
        return True
    d = np.hypot(others[:, 0] - point[0], others[:, 1] - point[1])
    return bool(np.all(d >= SAFE_DISTANCE))


def dls_mutate(positions: np.ndarray, side: float, spacing: float, rng,
               variant: str, mutation_prob: float | None = None):
    """Move each buoy with prob 1/N by one grid step (variant I) or by a
    rounded normal offset of sigma = 3 cells (variant II).

    Moves that land outside the farm or within the safety distance of
    another buoy are resampled up to 10 times, then skipped.  Returns
    (child, moved).
    """
    n = positions.shape[0]
    prob = (1.0 / n) if mutation_prob is None else mutation_prob
    child = positions.copy()
    moved = False
    for i in range(n):
        if rng.random() >= prob:
            continue
        others = np.delete(child, i, axis=0)
        for _ in range(10):
            if variant == "I":
                step = _NEIGHBOR_STEPS[rng.integers(8)] * spacing
            else:
                step = np.rint(rng.normal(0.0, 3.0, 2)) * spacing
            target = child[i] + step
            if _dls_feasible(target, others, side):
                if not np.array_equal(target, child[i]):
                    moved = True
                child[i] = target
                break
    return child, moved


def dls_loop(tracker: ObjectiveTracker, positions, power: float, spacing: float,
             rng, variant: str, eval_cap: int | None = None,
             imporate_threshold: float | None = None,
             generation_size: int | None = None):
    """Elitist 1+1 DLS; optionally bounded by an improvement-rate window.

    eval_cap is a cumulative tracker count, not a stage-local one, so the
    hybrid can hand the stage boundary over directly.  A "generation" for
    improvement-rate bookkeeping is `generation_size` evaluations.
    """
    side = tracker.problem.side
    n = positions.shape[0]
    gen_size = generation_size or max(1, n)
    history = [power]
    evals_in_gen = 0
    generation = 0
    stall = 0
    try:
        while tracker.remaining > 0:
            if eval_cap is not None and tracker.evaluations >= eval_cap:
                break
            child, moved = dls_mutate(positions, side, spacing, rng, variant)
            if not moved:
                stall += 1
                if stall > 10000:
                    break
                continue
            candidate_power = tracker.evaluate(child)
            evals_in_gen += 1
            if candidate_power > power:
                positions, power = child, candidate_power
            if evals_in_gen >= gen_size:
                generation += 1
                evals_in_gen = 0
                history.append(power)
                rate = improvement_rate(history)
                tracker.log_generation(generation, power, rate)
                if (imporate_threshold is not None and rate is not None
                        and rate < imporate_threshold):
                    break
    except BudgetExhausted:
        pass
    return positions, power


def run_binary(problem: LayoutProblem, budget: Budget, params: EAParams, rng,
               variant: str) -> "RunRecord":
    """Plain bGA / bDE / bPSO over the whole safety-distance grid."""
    if variant not in ("bGA", "bDE", "bPSO"):
        raise InvalidParamsError(f"unknown binary optimizer {variant!r}")
    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage(variant.lower())
    grid = GridSpec(problem.side, params.grid_spacing)
    if problem.n_buoys > grid.n_cells:
        raise InvalidParamsError("more buoys than grid cells")
    lam = params.population

    def evaluate_genome(genome):
        layout = decode(genome, grid)
        return layout, tracker.evaluate(layout)

    state = None
    pop = None
    try:
        pop = init_population(lam, grid.n_cells, problem.n_buoys,
                              evaluate_genome, rng)
        if variant == "bPSO":
            state = PSOState.from_population(pop)
        g_max = max(1, budget.max_evaluations // lam - 1)
        history = [float(pop.fitness.max())]
        generation = 0
        while tracker.remaining > 0:
            generation += 1
            if variant == "bGA":
                pop = bga_step(pop, evaluate_genome, params, rng)
            elif variant == "bDE":
                pop = bde_step(pop, evaluate_genome, params, rng)
            else:
                inertia = pso_inertia(params, generation - 1, g_max)
                state, pop = bpso_step(state, pop, evaluate_genome, params,
                                       rng, inertia)
            history.append(float(pop.fitness.max()) if variant != "bPSO"
                           else float(state.gbest_fitness))
            tracker.log_generation(generation, history[-1],
                                   improvement_rate(history))
    except BudgetExhausted:
        pass
    if pop is None or tracker.best_full_positions is None:
        raise InvalidParamsError("budget too small to evaluate any layout")
    if variant == "bPSO" and state is not None:
        best_layout, best_power = state.gbest_layout, state.gbest_fitness
    else:
        idx = pop.best_index
        best_layout, best_power = pop.layouts[idx], float(pop.fitness[idx])
    if tracker.best_full_power > best_power:
        best_layout, best_power = tracker.best_full_positions, tracker.best_full_power
    return tracker.finalize(variant, 0, best_layout, best_power, 0.0)


def dls(problem: LayoutProblem, budget: Budget, params: EAParams, rng,
        variant: str = "I", start_positions=None) -> "RunRecord":
    """Standalone DLS run on the safety grid.

    Variant I starts from one random grid genome; variant II evaluates an
    initial population of `params.population` genomes and starts from the
    best of them.  A start layout (not necessarily grid aligned) can be
    supplied instead, which is how the hybrid backtracking uses it.
    """
    if variant not in ("I", "II"):
        raise InvalidParamsError(f"unknown DLS variant {variant!r}")
    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage("dls")
    grid = GridSpec(problem.side, params.grid_spacing)
    try:
        if start_positions is not None:
            positions = np.asarray(start_positions, dtype=float).reshape(-1, 2)
            power = tracker.evaluate(positions)
        elif variant == "I":
            positions = decode(random_genome(grid.n_cells, problem.n_buoys, rng), grid)
            power = tracker.evaluate(positions)
        else:
            positions, power = None, -np.inf
            for _ in range(params.population):
                candidate = decode(random_genome(grid.n_cells, problem.n_buoys, rng), grid)
                p = tracker.evaluate(candidate)
                if p > power:
                    positions, power = candidate, p
    except BudgetExhausted:
        best = tracker.best_full_positions
        return tracker.finalize(f"DLS-{variant}", 0, best, tracker.best_full_power, 0.0)
    positions, power = dls_loop(tracker, positions, power, params.grid_spacing,
                                rng, variant, generation_size=params.population)
    return tracker.finalize(f"DLS-{variant}", 0, positions, power, 0.0)
