"""Command-line interface.

Subcommands: evaluate, optimize, benchmark, analyze (removal | landscape)
and plot.  Exit code 0 on success; any error prints one diagnostic line
to stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ..climate import load_climate_csv, synthetic_climate
from ..errors import WavefarmError
from ..farm import load_layout
from ..hydro import (Coupling, PowerEvaluator, default_buoy_spec,
                     default_hydro_table, load_table_csv)
from .analysis import buoy_removal_analysis, landscape_scan
from .experiment import load_config, run_benchmark, run_experiment, write_outputs
from .svgplot import plot_layout


def _build_evaluator(args):
    table = (default_hydro_table() if args.table is None
             else load_table_csv(args.table))
    if args.climate in ("perth_like", "sydney_like"):
        climate = synthetic_climate(args.climate)
    else:
        climate = load_climate_csv(args.climate)
    spec = default_buoy_spec(table, climate.modal_frequency())
    return PowerEvaluator(spec, table, climate, Coupling())


def _add_evaluator_args(sub):
    sub.add_argument("--climate", default="perth_like",
                     help="synthetic site name or climate CSV path")
    sub.add_argument("--table", default=None,
                     help="hydrodynamic table CSV (default: bundled table)")


def cmd_evaluate(args) -> int:
    layout = load_layout(args.layout)
    evaluator = _build_evaluator(args)
    power = evaluator.annual_power(layout.positions)
    q = evaluator.q_factor(layout.positions)
    print(f"Power={round(power)} (Watt), q-factor={q:.2f}")
    return 0


def cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    by_algorithm, stats = run_experiment(cfg)
    write_outputs(cfg, by_algorithm, stats)
    for algo, summary in stats.items():
        print(f"{algo}: best={summary.max:.0f} W mean={summary.mean:.0f} W "
              f"over {len(cfg.seeds)} seed(s) -> {cfg.output_dir}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = load_config(args.config)
    _, stats, ranks = run_benchmark(cfg)
    for algo in cfg.algorithms:
        print(f"{algo}: mean={stats[algo].mean:.0f} W "
              f"rank={ranks[algo]:.2f}")
    print(f"results written to {cfg.output_dir}")
    return 0


def cmd_analyze(args) -> int:
    layout = load_layout(args.layout)
    evaluator = _build_evaluator(args)
    if args.mode == "removal":
        rows = buoy_removal_analysis(layout.positions, evaluator)
        lines = ["n_buoys,power,q_factor"]
        lines += [f"{n},{repr(p)},{repr(q)}" for n, p, q in rows]
    else:
        rows = landscape_scan(layout.positions[:-1] if layout.positions.shape[0] > 1
                              else np.zeros((0, 2)),
                              evaluator, layout.side, step=args.step)
        lines = ["x,y,probe_power,total_power,masked"]
        lines += [f"{repr(x)},{repr(y)},{'' if m else repr(pp)},"
                  f"{'' if m else repr(tp)},{int(m)}"
                  for x, y, pp, tp, m in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_plot(args) -> int:
    layout = load_layout(args.layout)
    if layout.positions.shape[0] > 0:
        evaluator = _build_evaluator(args)
        per_buoy = evaluator.per_buoy_annual(layout.positions)
        q = evaluator.q_factor(layout.positions)
    else:
        per_buoy, q = np.zeros(0), None
    svg = plot_layout(layout.positions, per_buoy, layout.side, q)
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavefarm",
        description="Wave farm power evaluation and layout optimization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="print power and q-factor of a layout")
    p.add_argument("--layout", required=True)
    _add_evaluator_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimize", help="run one optimization experiment")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("benchmark", help="compare algorithms, emit stats + ranks")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("analyze", help="buoy-removal curve or landscape scan")
    p.add_argument("mode", choices=("removal", "landscape"))
    p.add_argument("--layout", required=True)
    p.add_argument("--step", type=float, default=25.0,
                   help="landscape grid step in metres")
    p.add_argument("--out", default=None)
    _add_evaluator_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("plot", help="render a layout as SVG")
    p.add_argument("--layout", required=True)
    p.add_argument("--out", required=True)
    _add_evaluator_args(p)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WavefarmError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
