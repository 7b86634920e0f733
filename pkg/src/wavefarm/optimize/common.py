"""Shared optimizer machinery: budgets, parameters, run tracking.

Every optimizer consumes a ``LayoutProblem`` (the annual-power objective
plus farm geometry) through an ``ObjectiveTracker`` that enforces the
evaluation budget, keeps the best-so-far curve and produces the final
``RunRecord``.  All randomness flows through an explicit generator, so a
run is a pure function of (algorithm, problem, budget, params, seed).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import BudgetExhausted, InvalidBudgetError, InvalidParamsError
from ..farm import clamp_to_farm, repair, violation_sum


@dataclass(frozen=True)
class Budget:
    """Evaluation allowance with stage split points for staged searches.

    stage_fractions (s1, s2) bound the binary and discrete-local-search
    stages of the hybrids at s1 * max_evaluations and s2 * max_evaluations
    cumulative objective calls.
    """

    max_evaluations: int
    stage_fractions: tuple = (1.0 / 3.0, 2.0 / 3.0)

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise InvalidBudgetError("budget must allow at least one evaluation")
        s1, s2 = self.stage_fractions
        if not (0.0 < s1 < s2 < 1.0):
            raise InvalidBudgetError("stage fractions must satisfy 0 < s1 < s2 < 1")

    def stage_cap(self, stage: int) -> int:
        """Cumulative evaluation cap at the end of stage 1 or 2."""
        return int(self.stage_fractions[stage - 1] * self.max_evaluations)


@dataclass(frozen=True)
class EAParams:
    """Knobs for every search variant, defaulting to the published values."""

    population: int = 12          # lambda, shared by DE/GA/PSO
    f: float = 0.5                # DE/rand/1 scale factor
    f0: float = 0.5               # adaptive-DE base scale
    p_cr: float = 0.8             # DE crossover probability
    sigma_fraction: float = 0.1   # 1+1EA mutation scale vs farm side
    # binary GA
    elitism: float = 0.10
    crossover_rate: float = 0.80
    mutation_rate: float = 0.10
    # binary PSO
    c1: float = 2.0
    c2: float = 2.0
    inertia_start: float = 2.0
    inertia_end: float = 1.5
    inertia_clamp: tuple | None = None  # optional (min, max) window
    velocity_clamp: float = 6.0
    # grids and local search
    grid_spacing: float = 50.0
    sublayout_size: int = 4       # buoys per surrogate tile
    ls_samples: int = 8           # LS-NM candidates per buoy
    ls_nm_iters: int = 50         # simplex iterations per placed buoy

    def __post_init__(self):
        if self.population < 1:
            raise InvalidParamsError("population size must be at least 1")
        if not 0.0 <= self.p_cr <= 1.0:
            raise InvalidParamsError("crossover probability must lie in [0, 1]")
        if self.f0 <= 0:
            raise InvalidParamsError("adaptive scale base must be positive")


@dataclass(frozen=True)
class LayoutProblem:
    """Objective plus geometry; evaluate accepts any (m, 2) position array."""

    n_buoys: int
    side: float
    evaluate: Callable
    dominant_direction: float = 0.0


@dataclass
class RunRecord:
    """Trace of one seeded optimization run."""

    algorithm: str
    seed: int
    n_buoys: int
    farm_side: float
    curve: list = field(default_factory=list)          # (eval_idx, best, stage)
    stage_markers: list = field(default_factory=list)  # (eval_idx, stage)
    generations: list = field(default_factory=list)    # (stage, gen, evals, best, imporate)
    final_positions: np.ndarray | None = None
    final_power: float = float("-inf")
    evaluations: int = 0
    skipped: int = 0
    overflow_evaluations: int = 0
    wall_time: float = 0.0

    @property
    def best_curve(self) -> np.ndarray:
        return np.array([b for _, b, _ in self.curve])


class ObjectiveTracker:
    """Budget enforcement plus best-so-far bookkeeping around an objective."""

    def __init__(self, problem: LayoutProblem, budget: Budget):
        self.problem = problem
        self.budget = budget
        self.evaluations = 0
        self.skipped = 0
        self.overflow = 0
        self.stage = "init"
        self.curve: list = []
        self.stage_markers: list = [(1, "init")]
        self.generations: list = []
        self.best_power = float("-inf")
        self.best_full_power = float("-inf")
        self.best_full_positions: np.ndarray | None = None

    @property
    def remaining(self) -> int:
        return self.budget.max_evaluations - self.evaluations

    def set_stage(self, stage: str) -> None:
        if stage != self.stage:
            self.stage = stage
            self.stage_markers.append((self.evaluations + 1, stage))

    def evaluate(self, positions: np.ndarray) -> float:
        """Spend one evaluation; raises BudgetExhausted when none is left."""
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget of {self.budget.max_evaluations} used up")
        power = float(self.problem.evaluate(positions))
        self.evaluations += 1
        if power > self.best_power:
            self.best_power = power
        if positions.shape[0] == self.problem.n_buoys and power > self.best_full_power:
            self.best_full_power = power
            self.best_full_positions = np.array(positions, dtype=float)
        self.curve.append((self.evaluations, self.best_power, self.stage))
        return power

    def evaluate_uncounted(self, positions: np.ndarray) -> float:
        """Bookkeeping evaluation outside the budget (final-report fallback)."""
        self.overflow += 1
        power = float(self.problem.evaluate(positions))
        if positions.shape[0] == self.problem.n_buoys and power > self.best_full_power:
            self.best_full_power = power
            self.best_full_positions = np.array(positions, dtype=float)
        return power

    def log_skip(self, count: int = 1) -> None:
        self.skipped += count

    def log_generation(self, generation: int, best: float, imporate) -> None:
        self.generations.append((self.stage, generation, self.evaluations,
                                 best, imporate))

    def finalize(self, algorithm: str, seed: int, positions, power,
                 wall_time: float) -> RunRecord:
        return RunRecord(
            algorithm=algorithm, seed=seed, n_buoys=self.problem.n_buoys,
            farm_side=self.problem.side, curve=self.curve,
            stage_markers=self.stage_markers, generations=self.generations,
            final_positions=np.array(positions, dtype=float),
            final_power=float(power), evaluations=self.evaluations,
            skipped=self.skipped, overflow_evaluations=self.overflow,
            wall_time=wall_time,
        )


def prepare_candidate(positions, side: float, rng):
    """Clamp, then repair if needed.  Returns (layout, feasible)."""
    pos = clamp_to_farm(positions, side)
    if violation_sum(pos) == 0.0:
        return pos, True
    return repair(pos, side, rng)


def random_feasible_layout(n: int, side: float, rng, max_tries: int = 100):
    """Uniform sample inside the farm, repaired; retried on repair failure."""
    for _ in range(max_tries):
        pos, ok = prepare_candidate(rng.uniform(0.0, side, (n, 2)), side, rng)
        if ok:
            return pos
    raise InvalidParamsError(f"could not draw a feasible {n}-buoy layout")


def improvement_rate(history: list, window: int = 5):
    """Relative best-power gain over the last `window` generations.

    None until the window has filled; the hybrid stage loops treat that
    as "keep going".
    """
    if len(history) < window + 1:
        return None
    past = history[-window - 1]
    if past <= 0:
        return None
    return (history[-1] - past) / past


def timed_runner(fn):
    """Wrap an optimizer entry point so the record carries its wall time."""
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        record = fn(*args, **kwargs)
        record.wall_time = time.perf_counter() - start
        return record
    return wrapper
