"""Summary statistics and Friedman ranking over experiment results."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass(frozen=True)
class SummaryStats:
    """Max/min/mean/median/std of final best powers across seeds.

    Std is the sample standard deviation (n-1 denominator), defined as
    zero for a single observation.
    """

    max: float
    min: float
    mean: float
    median: float
    std: float

    @classmethod
    def from_finals(cls, finals) -> "SummaryStats":
        arr = np.asarray(finals, dtype=float)
        if arr.size == 0:
            raise ValueError("no final values to summarize")
        std = 0.0 if arr.size == 1 else float(np.std(arr, ddof=1))
        return cls(max=float(arr.max()), min=float(arr.min()),
                   mean=float(arr.mean()), median=float(np.median(arr)),
                   std=std)

    def as_rows(self):
        return (("Max", self.max), ("Min", self.min), ("Mean", self.mean),
                ("Median", self.median), ("Std", self.std))


def friedman_ranks(results) -> np.ndarray:
    """Average rank per algorithm over problem instances.

    ``results[i][j]`` is the final best of algorithm j on instance i.
    Within each instance the highest power gets rank 1; ties receive the
    mean of the ranks they span.  Returns the per-algorithm mean rank.
    """
    table = np.asarray(results, dtype=float)
    if table.ndim != 2 or table.size == 0:
        raise ValueError("results must be a non-empty 2-D matrix")
    ranks = np.vstack([rankdata(-row, method="average") for row in table])
    return ranks.mean(axis=0)
