"""Continuous layout optimizers: 1+1EA, DE, adaptive DE, LS-NM and CLS.

All of them work on the flat 2N coordinate vector inside the square farm.
Candidates are clamped and repaired before evaluation; a candidate whose
repair fails is skipped and logged, never evaluated.
"""

from __future__ import annotations

import numpy as np

from ..errors import BudgetExhausted, InvalidParamsError
from ..farm import SAFE_DISTANCE, clamp_to_farm
from ..simplex import SimplexConfig, minimize
from .common import (Budget, EAParams, LayoutProblem, ObjectiveTracker,
                     improvement_rate, prepare_candidate,
                     random_feasible_layout)

LS_SAMPLE_SIGMA = 70.0   # metres, offset scale for sequential placement
CLS_SIGMA_START = 20.0   # metres
CLS_SIGMA_END = 1.0      # metres


def mutate_per_buoy(positions, sigma: float, rng, prob: float | None = None):
    """Gaussian offset on each buoy independently with probability 1/N."""
    n = positions.shape[0]
    if prob is None:
        prob = 1.0 / n
    child = positions.copy()
    mask = rng.random(n) < prob
    if mask.any():
        child[mask] += rng.normal(0.0, sigma, (int(mask.sum()), 2))
    return child, bool(mask.any())


def one_plus_one_ea(problem: LayoutProblem, budget: Budget, params: EAParams,
                    rng) -> "RunRecord":
    """Elitist single-individual search mutating each buoy with prob 1/N."""
    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage("1+1ea")
    sigma = params.sigma_fraction * problem.side
    parent = random_feasible_layout(problem.n_buoys, problem.side, rng)
    parent_power = tracker.evaluate(parent)
    try:
        while tracker.remaining > 0:
            child, _ = mutate_per_buoy(parent, sigma, rng)
            child, ok = prepare_candidate(child, problem.side, rng)
            if not ok:
                tracker.log_skip()
                continue
            power = tracker.evaluate(child)
            if power >= parent_power:
                parent, parent_power = child, power
    except BudgetExhausted:
        pass
    return tracker.finalize("1+1EA", 0, parent, parent_power, 0.0)


def de(problem: LayoutProblem, budget: Budget, params: EAParams, rng,
       variant: str = "rand1bin") -> "RunRecord":
    """Differential evolution on the flat coordinate vector.

    variant "rand1bin" is DE/rand/1/bin with constant F; variant
    "best1bin_adaptive" is the improved scheme: DE/best/1/bin with
    F = F0 * 2^(exp(1 - Gm / (Gm + 1 - G))) decaying from 2 F0 to F0
    over the generations.
    """
    if variant not in ("rand1bin", "best1bin_adaptive"):
        raise InvalidParamsError(f"unknown DE variant {variant!r}")
    lam = params.population
    if variant == "rand1bin" and lam < 4:
        raise InvalidParamsError("DE/rand/1 needs at least 4 individuals")
    if variant == "best1bin_adaptive" and lam < 3:
        raise InvalidParamsError("DE/best/1 needs at least 3 individuals")

    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage("de")
    n, side = problem.n_buoys, problem.side
    dims = 2 * n
    g_max = max(1, budget.max_evaluations // lam - 1)

    population = []
    fitness = []
    try:
        for _ in range(lam):
            layout = random_feasible_layout(n, side, rng)
            population.append(layout.ravel())
            fitness.append(tracker.evaluate(layout))
    except BudgetExhausted:
        best = int(np.argmax(fitness))
        return tracker.finalize(variant, 0, population[best].reshape(-1, 2),
                                fitness[best], 0.0)
    population = np.array(population)
    fitness = np.array(fitness)

    best_history = [float(fitness.max())]
    generation = 0
    try:
        while tracker.remaining > 0:
            generation += 1
            g_eff = min(generation, g_max)
            if variant == "best1bin_adaptive":
                f_scale = params.f0 * 2.0 ** np.exp(1.0 - g_max / (g_max + 1.0 - g_eff))
            else:
                f_scale = params.f
            old_pop = population.copy()
            old_fit = fitness.copy()
            best_idx = int(np.argmax(old_fit))
            for i in range(lam):
                others = [j for j in range(lam) if j != i]
                if variant == "rand1bin":
                    r1, r2, r3 = rng.choice(others, size=3, replace=False)
                    mutant = old_pop[r1] + f_scale * (old_pop[r2] - old_pop[r3])
                else:
                    r1, r2 = rng.choice(others, size=2, replace=False)
                    mutant = old_pop[best_idx] + f_scale * (old_pop[r1] - old_pop[r2])
                cross = rng.random(dims) < params.p_cr
                cross[rng.integers(dims)] = True
                trial = np.where(cross, mutant, old_pop[i])
                candidate, ok = prepare_candidate(trial.reshape(-1, 2), side, rng)
                if not ok:
                    tracker.log_skip()
                    continue
                power = tracker.evaluate(candidate)
                if power >= old_fit[i]:
                    population[i] = candidate.ravel()
                    fitness[i] = power
            best_history.append(float(fitness.max()))
            tracker.log_generation(generation, best_history[-1],
                                   improvement_rate(best_history))
    except BudgetExhausted:
        pass
    best = int(np.argmax(fitness))
    return tracker.finalize(variant, 0, population[best].reshape(-1, 2),
                            float(fitness[best]), 0.0)


def _feasible_against(point, placed, side) -> bool:
    if np.any(point < 0.0) or np.any(point > side):
        return False
    if len(placed) == 0:
        return True
    d = np.hypot(*(np.asarray(placed) - point).T)
    return bool(np.all(d >= SAFE_DISTANCE))


def place_buoy_lsnm(tracker: ObjectiveTracker, placed: list, side: float,
                    params: EAParams, rng):
    """Place one more buoy: sampled around the last one, then NM-refined.

    Returns (position, power_of_extended_layout).  Candidates violating
    the safety distance are discarded without costing evaluations; the
    sampling radius is widened when a whole batch is infeasible.  The
    first buoy starts from a uniform draw (there is no anchor yet).
    """
    frozen = np.array(placed, dtype=float).reshape(-1, 2)

    if not placed:
        best_point = rng.uniform(0.0, side, 2)
        best_power = tracker.evaluate(best_point[None, :])
    else:
        anchor = np.asarray(placed[-1], dtype=float)
        sigma = LS_SAMPLE_SIGMA
        best_point, best_power = None, -np.inf
        for _ in range(6):  # widen the net until something feasible turns up
            offsets = rng.normal(0.0, sigma, (params.ls_samples, 2))
            for off in offsets:
                point = np.clip(anchor + off, 0.0, side)
                if not _feasible_against(point, placed, side):
                    tracker.log_skip()
                    continue
                power = tracker.evaluate(np.vstack([frozen, point]))
                if power > best_power:
                    best_point, best_power = point, power
            if best_point is not None:
                break
            sigma *= 1.5
        if best_point is None:
            raise InvalidParamsError("no feasible placement found around the last buoy")

    def negated(point):
        if not _feasible_against(point, placed, side):
            return np.inf
        return -tracker.evaluate(np.vstack([frozen, point]))

    cfg = SimplexConfig(initial_edge=10.0, max_iters=params.ls_nm_iters)
    refined, value = minimize(negated, best_point,
                              (np.zeros(2), np.full(2, side)), cfg, rng)
    return refined, -value


def _grid_fill(placed: list, n: int, side: float) -> list:
    """Deterministic completion on the safety grid for exhausted budgets."""
    filled = list(placed)
    step = SAFE_DISTANCE
    coords = np.arange(0.0, side + 1e-9, step)
    for y in coords:
        for x in coords:
            if len(filled) >= n:
                return filled
            point = np.array([x, y])
            if _feasible_against(point, filled, side):
                filled.append(point)
    return filled


def ls_nm(problem: LayoutProblem, budget: Budget, params: EAParams,
          rng) -> "RunRecord":
    """Sequential placement: sample near the last buoy, refine with simplex.

    The partial-farm objective only sees the buoys placed so far.  If the
    budget dies early, the layout is completed on the safety grid and the
    final evaluation is recorded as an overflow.
    """
    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage("ls-nm")
    placed: list = []
    power = -np.inf
    try:
        while len(placed) < problem.n_buoys:
            point, power = place_buoy_lsnm(tracker, placed, problem.side, params, rng)
            placed.append(np.asarray(point, dtype=float))
    except BudgetExhausted:
        pass
    if len(placed) < problem.n_buoys:
        placed = _grid_fill(placed, problem.n_buoys, problem.side)
        final = np.asarray(placed)
        try:
            power = tracker.evaluate(final)
        except BudgetExhausted:
            power = tracker.evaluate_uncounted(final)
    return tracker.finalize("LS-NM", 0, np.asarray(placed), power, 0.0)


def cls_sigma_schedule(n_steps: int) -> np.ndarray:
    """Linear decay of the CLS mutation scale: 20 m down to 1 m."""
    if n_steps <= 1:
        return np.full(max(n_steps, 1), CLS_SIGMA_START)
    return np.linspace(CLS_SIGMA_START, CLS_SIGMA_END, n_steps)


def cls_loop(tracker: ObjectiveTracker, positions, power: float, rng,
             allotted: int):
    """Elitist 1+1 search with the shrinking normal step; returns the best."""
    n = positions.shape[0]
    side = tracker.problem.side
    schedule = cls_sigma_schedule(allotted)
    step = 0
    stall = 0
    try:
        while tracker.remaining > 0 and step < allotted:
            sigma = schedule[min(step, len(schedule) - 1)]
            child, moved = mutate_per_buoy(positions, sigma, rng)
            if not moved:
                stall += 1
                if stall > 10000:
                    break
                continue
            child, ok = prepare_candidate(child, side, rng)
            if not ok:
                tracker.log_skip()
                continue
            candidate_power = tracker.evaluate(child)
            step += 1
            if candidate_power > power:
                positions, power = child, candidate_power
    except BudgetExhausted:
        pass
    return positions, power


def cls(problem: LayoutProblem, start_positions, budget: Budget, rng,
        params: EAParams = EAParams()) -> "RunRecord":
    """Standalone continuous local search from a feasible start layout."""
    tracker = ObjectiveTracker(problem, budget)
    tracker.set_stage("cls")
    start = np.asarray(start_positions, dtype=float).reshape(-1, 2)
    power = tracker.evaluate(start)
    positions, power = cls_loop(tracker, start, power, rng, tracker.remaining)
    return tracker.finalize("CLS", 0, positions, power, 0.0)
