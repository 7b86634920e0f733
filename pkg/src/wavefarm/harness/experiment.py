"""Experiment configuration, seeded multi-run execution and persistence.

Configs are INI files with one section per module.  Every optimizer
parameter defaults to the published value, so a minimal config is just
the experiment section.  Outputs under the configured directory are
byte-reproducible for a fixed config: floats are written with repr and
nothing volatile (timestamps, wall times) enters the CSVs; timings go to
a separate file outside the determinism contract.
"""

from __future__ import annotations

import configparser
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import __version__
from ..climate import N_BETA, N_OMEGA, load_climate_csv, synthetic_climate
from ..errors import ConfigError
from ..farm import farm_side, save_layout
from ..hydro import (Coupling, PowerEvaluator, default_buoy_spec,
                     default_hydro_table, load_table_csv)
from ..optimize import (ALGORITHMS, Budget, EAParams, LayoutProblem,
                        run_algorithm)
from .stats import SummaryStats, friedman_ranks


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully parsed experiment description; plain data, picklable."""

    name: str = "experiment"
    algorithms: tuple = ("MS-bDE",)
    n_buoys: int = 16
    budget: int = 3000
    stage_fractions: tuple = (1.0 / 3.0, 2.0 / 3.0)
    seeds: tuple = (1,)
    output_dir: str = "runs/experiment"
    workers: int = 1
    friedman_mode: str = "per_run"
    climate_site: str | None = "perth_like"
    climate_csv: str | None = None
    n_omega: int = N_OMEGA
    n_beta: int = N_BETA
    table_path: str | None = None
    coupling_kind: str = "bessel"
    attenuation_scale: float = 2000.0
    params: EAParams = field(default_factory=EAParams)


def _parse_floats(text: str):
    return tuple(float(v.strip()) for v in text.split(",") if v.strip())


def load_config(path) -> ExperimentConfig:
    """Parse an INI experiment file into an ExperimentConfig."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    try:
        exp = parser["experiment"] if parser.has_section("experiment") else {}
        algorithms = exp.get("algorithms", exp.get("algorithm", "MS-bDE"))
        algorithms = tuple(a.strip() for a in algorithms.split(",") if a.strip())
        for algo in algorithms:
            if algo not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {algo!r} in config")
        seeds = tuple(int(s) for s in exp.get("seeds", "1").split(",") if s.strip())
        if len(seeds) == 0 or len(set(seeds)) != len(seeds):
            raise ConfigError("seeds must be non-empty and distinct")
        fractions = _parse_floats(exp.get("stage_fractions", "0.3333, 0.6667"))
        if len(fractions) != 2:
            raise ConfigError("stage_fractions needs two values")

        climate = parser["climate"] if parser.has_section("climate") else {}
        hydro = parser["hydro"] if parser.has_section("hydro") else {}
        opt = parser["optimizer"] if parser.has_section("optimizer") else {}

        defaults = EAParams()
        params = EAParams(
            population=int(opt.get("population", defaults.population)),
            f=float(opt.get("f", defaults.f)),
            f0=float(opt.get("f0", defaults.f0)),
            p_cr=float(opt.get("p_cr", defaults.p_cr)),
            sigma_fraction=float(opt.get("sigma_fraction", defaults.sigma_fraction)),
            elitism=float(opt.get("elitism", defaults.elitism)),
            crossover_rate=float(opt.get("crossover_rate", defaults.crossover_rate)),
            mutation_rate=float(opt.get("mutation_rate", defaults.mutation_rate)),
            c1=float(opt.get("c1", defaults.c1)),
            c2=float(opt.get("c2", defaults.c2)),
            inertia_start=float(opt.get("inertia_start", defaults.inertia_start)),
            inertia_end=float(opt.get("inertia_end", defaults.inertia_end)),
            inertia_clamp=(_parse_floats(opt["inertia_clamp"])
                           if "inertia_clamp" in opt else None),
            velocity_clamp=float(opt.get("velocity_clamp", defaults.velocity_clamp)),
            grid_spacing=float(opt.get("grid_spacing", defaults.grid_spacing)),
            sublayout_size=int(opt.get("sublayout_size", defaults.sublayout_size)),
            ls_samples=int(opt.get("ls_samples", defaults.ls_samples)),
            ls_nm_iters=int(opt.get("ls_nm_iters", defaults.ls_nm_iters)),
        )

        site = climate.get("site", None)
        csv_path = climate.get("csv", None)
        if site is None and csv_path is None:
            site = "perth_like"

        return ExperimentConfig(
            name=exp.get("name", "experiment"),
            algorithms=algorithms,
            n_buoys=int(exp.get("n_buoys", 16)),
            budget=int(exp.get("budget", 3000)),
            stage_fractions=fractions,
            seeds=seeds,
            output_dir=exp.get("output_dir", "runs/experiment"),
            workers=int(exp.get("workers", 1)),
            friedman_mode=exp.get("friedman_mode", "per_run"),
            climate_site=site,
            climate_csv=csv_path,
            n_omega=int(climate.get("n_omega", N_OMEGA)),
            n_beta=int(climate.get("n_beta", N_BETA)),
            table_path=None if hydro.get("table", "default") == "default"
                       else hydro.get("table"),
            coupling_kind=hydro.get("coupling", "bessel"),
            attenuation_scale=float(hydro.get("attenuation_scale", 2000.0)),
            params=params,
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc


def build_environment(cfg: ExperimentConfig):
    """Construct (table, climate, spec, evaluator) from a config."""
    table = (default_hydro_table() if cfg.table_path is None
             else load_table_csv(cfg.table_path))
    if cfg.climate_csv is not None:
        climate = load_climate_csv(cfg.climate_csv, cfg.n_omega, cfg.n_beta)
    else:
        climate = synthetic_climate(cfg.climate_site, cfg.n_omega, cfg.n_beta)
    spec = default_buoy_spec(table, climate.modal_frequency())
    coupling = Coupling(cfg.coupling_kind, cfg.attenuation_scale)
    evaluator = PowerEvaluator(spec, table, climate, coupling)
    return table, climate, spec, evaluator


def build_problem(cfg: ExperimentConfig):
    _, climate, _, evaluator = build_environment(cfg)
    side = farm_side(cfg.n_buoys)
    problem = LayoutProblem(cfg.n_buoys, side, evaluator.annual_power,
                            climate.dominant_direction)
    return problem, evaluator


def _run_single(cfg: ExperimentConfig, algorithm: str, seed: int):
    problem, _ = build_problem(cfg)
    budget = Budget(cfg.budget, cfg.stage_fractions)
    return run_algorithm(algorithm, problem, budget, cfg.params, seed)


def run_experiment(cfg: ExperimentConfig, algorithms=None):
    """Run every (algorithm, seed) pair; returns records and stats.

    Seeds run concurrently when cfg.workers > 1; aggregation order is
    fixed by the config regardless of completion order.
    """
    algorithms = tuple(algorithms or cfg.algorithms)
    jobs = [(algo, seed) for algo in algorithms for seed in cfg.seeds]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_single, cfg, a, s) for a, s in jobs]
            records = [f.result() for f in futures]
    else:
        records = [_run_single(cfg, a, s) for a, s in jobs]

    by_algorithm = {}
    for record in records:
        by_algorithm.setdefault(record.algorithm, []).append(record)
    stats = {algo: SummaryStats.from_finals([r.final_power for r in recs])
             for algo, recs in by_algorithm.items()}
    return by_algorithm, stats


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_outputs(cfg: ExperimentConfig, by_algorithm: dict, stats: dict,
                  friedman=None):
    """Persist records, stats, layouts and the manifest under output_dir."""
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    for sub in ("curves", "layouts", "generations"):
        os.makedirs(os.path.join(out, sub), exist_ok=True)

    algorithms = [a for a in cfg.algorithms if a in by_algorithm]
    rows = []
    for label_idx, label in enumerate(("Max", "Min", "Mean", "Median", "Std")):
        row = [label]
        for algo in algorithms:
            row.append(_format(stats[algo].as_rows()[label_idx][1]))
        rows.append(row)
    _write_csv(os.path.join(out, "results.csv"), ["statistic"] + algorithms, rows)

    if friedman is not None:
        _write_csv(os.path.join(out, "friedman.csv"), ["algorithm", "average_rank"],
                   [[algo, _format(float(rank))]
                    for algo, rank in zip(algorithms, friedman)])

    manifest = {"name": cfg.name, "version": __version__,
                "n_buoys": cfg.n_buoys, "budget": cfg.budget,
                "seeds": list(cfg.seeds), "algorithms": algorithms,
                "climate": cfg.climate_csv or cfg.climate_site,
                "runs": []}
    timing_lines = []
    for algo in algorithms:
        for record in by_algorithm[algo]:
            stem = f"{algo}_seed{record.seed}"
            curve_path = os.path.join(out, "curves", f"{stem}.csv")
            _write_csv(curve_path, ["evaluation", "best_power", "stage"],
                       [[str(i), _format(float(p)), s] for i, p, s in record.curve])
            layout_path = os.path.join(out, "layouts", f"{stem}.json")
            save_layout(layout_path, record.final_positions, record.farm_side)
            gen_path = os.path.join(out, "generations", f"{stem}.csv")
            _write_csv(gen_path,
                       ["stage", "generation", "evaluations", "best_power", "imporate"],
                       [[s, str(g), str(e), _format(float(b)),
                         "" if r is None else _format(float(r))]
                        for s, g, e, b, r in record.generations])
            manifest["runs"].append({
                "algorithm": algo, "seed": record.seed,
                "final_power": record.final_power,
                "evaluations": record.evaluations,
                "skipped": record.skipped,
                "overflow_evaluations": record.overflow_evaluations,
                "curve": os.path.relpath(curve_path, out),
                "layout": os.path.relpath(layout_path, out),
            })
            timing_lines.append(f"{stem}: {record.wall_time:.3f} s")
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    # Wall-clock timings are volatile by nature and live outside the
    # byte-reproducibility contract.
    with open(os.path.join(out, "timings.txt"), "w") as fh:
        fh.write("\n".join(timing_lines) + "\n")


def run_benchmark(cfg: ExperimentConfig):
    """Multi-algorithm comparison: stats plus Friedman average ranks."""
    by_algorithm, stats = run_experiment(cfg)
    algorithms = [a for a in cfg.algorithms if a in by_algorithm]
    if cfg.friedman_mode == "per_run":
        matrix = [[by_algorithm[a][i].final_power for a in algorithms]
                  for i in range(len(cfg.seeds))]
    elif cfg.friedman_mode == "per_method_mean":
        matrix = [[stats[a].mean for a in algorithms]]
    else:
        raise ConfigError(f"unknown friedman_mode {cfg.friedman_mode!r}")
    ranks = friedman_ranks(matrix)
    write_outputs(cfg, by_algorithm, stats, friedman=ranks)
    return by_algorithm, stats, dict(zip(algorithms, ranks))
