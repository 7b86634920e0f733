"""Static SVG rendering of farm layouts.

Buoys are drawn as circles colored by a linear power-to-color ramp from
cold blue (weakest) to warm red (strongest); the caption line carries the
farm power and q-factor.  Output is deterministic: no timestamps, no
generator metadata.
"""

from __future__ import annotations

import numpy as np

CANVAS = 640          # px, drawing area for the farm square
MARGIN = 40           # px
CAPTION_HEIGHT = 28   # px
BUOY_RADIUS = 7       # px

COLD = np.array([33, 102, 172])   # low power
WARM = np.array([178, 24, 43])    # high power


def power_color(power: float, lo: float, hi: float) -> str:
    """Linear interpolation between the cold and warm endpoint colors."""
    t = 0.5 if hi <= lo else (power - lo) / (hi - lo)
    rgb = np.rint(COLD + (WARM - COLD) * t).astype(int)
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def plot_layout(positions, per_buoy_powers, side: float,
                q_factor: float | None = None) -> str:
    """Render a layout as an SVG document string."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    powers = np.asarray(per_buoy_powers, dtype=float).reshape(-1)
    if pos.shape[0] != powers.shape[0]:
        raise ValueError("one power value per buoy is required")
    total = float(powers.sum()) if powers.size else 0.0
    q_text = "n/a" if q_factor is None else f"{q_factor:.2f}"
    caption = f"Power={round(total)} (Watt), q-factor={q_text}"

    scale = CANVAS / side
    width = CANVAS + 2 * MARGIN
    height = CANVAS + 2 * MARGIN + CAPTION_HEIGHT

    def to_px(xy):
        # y axis points up in farm coordinates, down in SVG
        return (MARGIN + xy[0] * scale, MARGIN + (side - xy[1]) * scale)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{CANVAS}" height="{CANVAS}" '
        'fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    lo = float(powers.min()) if powers.size else 0.0
    hi = float(powers.max()) if powers.size else 0.0
    for xy, p in zip(pos, powers):
        cx, cy = to_px(xy)
        parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{BUOY_RADIUS}" '
                     f'fill="{power_color(float(p), lo, hi)}" stroke="black" '
                     'stroke-width="0.5"/>')
    parts.append(f'<text x="{MARGIN}" y="{CANVAS + 2 * MARGIN + 18}" '
                 f'font-family="sans-serif" font-size="16">{caption}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
