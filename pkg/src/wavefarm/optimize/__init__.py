"""Optimizer registry: fifteen named search methods over one interface.

``run_algorithm(algorithm, problem, budget, params, seed)`` is the single
entry point the harness uses; each run owns an independent generator
seeded from its seed, so records are reproducible bit for bit.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import InvalidParamsError
from .common import (Budget, EAParams, LayoutProblem, ObjectiveTracker,
                     RunRecord, random_feasible_layout)
from .continuous import cls, de, ls_nm, one_plus_one_ea
from .discrete import (GridSpec, PSOState, bde_mutant, bde_step, bga_step,
                       bpso_step, bpso_transfer, decode, dls, encode,
                       enforce_popcount, run_binary)
from .hybrid import (SubLayout, TileGrid, build_tile_grid, decode_tiles,
                     ms_run, rotate_sublayout, rotation_pass, sls_nm_surrogate,
                     slsnm_hybrid_run, smart_init)

_RUNNERS = {
    "1+1EA": lambda p, b, e, r: one_plus_one_ea(p, b, e, r),
    "DE": lambda p, b, e, r: de(p, b, e, r, variant="rand1bin"),
    "IDE": lambda p, b, e, r: de(p, b, e, r, variant="best1bin_adaptive"),
    "LS-NM": lambda p, b, e, r: ls_nm(p, b, e, r),
    "bGA": lambda p, b, e, r: run_binary(p, b, e, r, "bGA"),
    "bDE": lambda p, b, e, r: run_binary(p, b, e, r, "bDE"),
    "bPSO": lambda p, b, e, r: run_binary(p, b, e, r, "bPSO"),
    "DLS-I": lambda p, b, e, r: dls(p, b, e, r, variant="I"),
    "DLS-II": lambda p, b, e, r: dls(p, b, e, r, variant="II"),
    "SLSNM-bGA": lambda p, b, e, r: slsnm_hybrid_run(p, b, e, r, "bGA"),
    "SLSNM-bDE": lambda p, b, e, r: slsnm_hybrid_run(p, b, e, r, "bDE"),
    "SLSNM-bPSO": lambda p, b, e, r: slsnm_hybrid_run(p, b, e, r, "bPSO"),
    "MS-bGA": lambda p, b, e, r: ms_run(p, b, e, r, "bGA"),
    "MS-bDE": lambda p, b, e, r: ms_run(p, b, e, r, "bDE"),
    "MS-bPSO": lambda p, b, e, r: ms_run(p, b, e, r, "bPSO"),
}

ALGORITHMS = tuple(_RUNNERS)


def run_algorithm(algorithm: str, problem: LayoutProblem, budget: Budget,
                  params: EAParams, seed: int) -> RunRecord:
    """Run one seeded search; the record carries the algorithm id and seed."""
    if algorithm not in _RUNNERS:
        raise InvalidParamsError(
            f"unknown algorithm {algorithm!r}; choose one of {', '.join(ALGORITHMS)}")
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    record = _RUNNERS[algorithm](problem, budget, params, rng)
    record.algorithm = algorithm
    record.seed = seed
    record.wall_time = time.perf_counter() - start
    return record


__all__ = [
    "ALGORITHMS", "run_algorithm",
    "Budget", "EAParams", "LayoutProblem", "ObjectiveTracker", "RunRecord",
    "random_feasible_layout",
    "cls", "de", "ls_nm", "one_plus_one_ea",
    "GridSpec", "PSOState", "bde_mutant", "bde_step", "bga_step", "bpso_step",
    "bpso_transfer", "decode", "dls", "encode", "enforce_popcount", "run_binary",
    "SubLayout", "TileGrid", "build_tile_grid", "decode_tiles", "ms_run",
    "rotate_sublayout", "rotation_pass", "sls_nm_surrogate", "slsnm_hybrid_run",
    "smart_init",
]
