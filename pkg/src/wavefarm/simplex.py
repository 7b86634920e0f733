"""Nelder-Mead simplex minimization over a box.

Trial vertices are clamped into the box before evaluation, which matches
how out-of-farm buoy positions are handled elsewhere.  The algorithm is
deterministic; the rng argument is accepted for interface uniformity with
the stochastic searches but is not consumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStartError


@dataclass(frozen=True)
class SimplexConfig:
    """Classical Nelder-Mead coefficients plus stopping controls.

    stop_below, when set, terminates as soon as the best vertex value
    drops to that target (used by constraint repair, whose penalty
    bottoms out at 1).
    """

    alpha: float = 1.0      # reflection
    gamma: float = 2.0      # expansion
    rho: float = 0.5        # contraction
    sigma: float = 0.5      # shrink
    initial_edge: float = 10.0
    max_iters: int = 200
    f_tolerance: float = 0.0
    stop_below: float | None = None

    def __post_init__(self):
        if self.alpha <= 0 or self.gamma <= 1:
            raise ValueError("need alpha > 0 and gamma > 1")
        if not (0 < self.rho < 1 and 0 < self.sigma < 1):
            raise ValueError("need contraction and shrink coefficients in (0, 1)")


def minimize(f, x0, bounds, cfg: SimplexConfig = SimplexConfig(), rng=None):
    """Minimize f over the box ``bounds = (lower, upper)`` starting at x0.

    Returns (x_best, f_best) with f_best <= f(x0); every evaluated point
    lies inside the box.
    """
    lower, upper = (np.broadcast_to(np.asarray(b, dtype=float), np.shape(x0)).copy()
                    for b in bounds)
    x0 = np.clip(np.asarray(x0, dtype=float), lower, upper)
    d = x0.size

    f0 = float(f(x0))
    if not np.isfinite(f0):
        raise InvalidStartError("objective is not finite at the start point")

    def clamp(x):
        return np.clip(x, lower, upper)

    # Start simplex: x0 plus one vertex per axis, stepping back from the
    # boundary when the forward step would not move.
    vertices = [x0]
    for i in range(d):
        v = x0.copy()
        step = cfg.initial_edge
        if v[i] + step > upper[i]:
            step = -step
        v[i] = np.clip(v[i] + step, lower[i], upper[i])
        vertices.append(v)
    values = np.array([f0] + [float(f(v)) for v in vertices[1:]])
    vertices = np.array(vertices)

    for _ in range(cfg.max_iters):
        order = np.argsort(values, kind="stable")
        vertices, values = vertices[order], values[order]
        if cfg.stop_below is not None and values[0] <= cfg.stop_below:
            break
        if values[-1] - values[0] <= cfg.f_tolerance:
            break

        centroid = vertices[:-1].mean(axis=0)
        worst = vertices[-1]

        reflected = clamp(centroid + cfg.alpha * (centroid - worst))
        f_r = float(f(reflected))
        if values[0] <= f_r < values[-2]:
            vertices[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[0]:
            expanded = clamp(centroid + cfg.gamma * (reflected - centroid))
            f_e = float(f(expanded))
            if f_e < f_r:
                vertices[-1], values[-1] = expanded, f_e
            else:
                vertices[-1], values[-1] = reflected, f_r
            continue
        contracted = clamp(centroid + cfg.rho * (worst - centroid))
        f_c = float(f(contracted))
        if f_c < values[-1]:
            vertices[-1], values[-1] = contracted, f_c
            continue
        # Shrink toward the best vertex.
        for i in range(1, len(vertices)):
            vertices[i] = clamp(vertices[0] + cfg.sigma * (vertices[i] - vertices[0]))
            values[i] = float(f(vertices[i]))

    best = int(np.argmin(values))
    return vertices[best].copy(), float(values[best])
