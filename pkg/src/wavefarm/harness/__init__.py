from .analysis import buoy_removal_analysis, landscape_scan
from .experiment import (ExperimentConfig, build_environment, build_problem,
                         load_config, run_benchmark, run_experiment,
                         write_outputs)
from .stats import SummaryStats, friedman_ranks
from .svgplot import plot_layout

__all__ = [
    "buoy_removal_analysis", "landscape_scan",
    "ExperimentConfig", "build_environment", "build_problem", "load_config",
    "run_benchmark", "run_experiment", "write_outputs",
    "SummaryStats", "friedman_ranks", "plot_layout",
]
