"""Layout diagnostics: buoy-removal curves and power-landscape scans."""

from __future__ import annotations

import numpy as np

from ..farm import SAFE_DISTANCE
from ..hydro import PowerEvaluator


def buoy_removal_analysis(positions, evaluator: PowerEvaluator):
    """Iteratively drop the weakest buoy and re-evaluate the farm.

    Returns a list of (n_remaining, total_power, q_factor) rows starting
    from the full layout down to a single buoy.  The weakest buoy is the
    one with the lowest per-buoy annual power in the current layout.
    """
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    iso = evaluator.isolated_power
    rows = []
    while pos.shape[0] >= 1:
        per_buoy = evaluator.per_buoy_annual(pos)
        total = float(per_buoy.sum())
        rows.append((pos.shape[0], total, total / (pos.shape[0] * iso)))
        if pos.shape[0] == 1:
            break
        pos = np.delete(pos, int(np.argmin(per_buoy)), axis=0)
    return rows


def landscape_scan(fixed_positions, evaluator: PowerEvaluator, side: float,
                   step: float = 25.0):
    """Grid-sample the power of a probe buoy added to a fixed layout.

    Nodes closer than the safety distance to a fixed buoy are masked and
    not evaluated.  Returns a list of (x, y, probe_power, total_power,
    masked) rows in row-major node order.
    """
    fixed = np.asarray(fixed_positions, dtype=float).reshape(-1, 2)
    coords = np.arange(0.0, side + 1e-9, step)
    rows = []
    for y in coords:
        for x in coords:
            node = np.array([x, y])
            if fixed.shape[0]:
                dmin = float(np.min(np.hypot(fixed[:, 0] - x, fixed[:, 1] - y)))
            else:
                dmin = np.inf
            if dmin < SAFE_DISTANCE:
                rows.append((float(x), float(y), float("nan"), float("nan"), True))
                continue
            layout = np.vstack([fixed, node])
            per_buoy = evaluator.per_buoy_annual(layout)
            rows.append((float(x), float(y), float(per_buoy[-1]),
                         float(per_buoy.sum()), False))
    return rows
