"""Static SVG renderers (fronts and path overlays).

Output is deterministic: fixed viewport logic, fixed element order,
floats via shortest round-trip repr.  No styling knobs beyond size.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .serialize import fmt_float as _f

__all__ = ["render_front_svg", "render_paths_svg"]

_SIZE = 640


def _poly_points(vertices, cx, cy, scale) -> str:
    return " ".join(f"{_f(cx + scale * x)},{_f(cy - scale * y)}"
                    for x, y in vertices)


def render_front_svg(front, size: int = _SIZE) -> str:
    """Both polygons of a front model with corners highlighted."""
    rmax = max(float(np.max(np.abs(front.d_hull))),
               float(np.max(np.abs(front.s_polygon))))
    scale = (size / 2 - 20) / rmax
    c = size / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{_f(c)}" x2="{size}" y2="{_f(c)}" '
        f'stroke="#dddddd" stroke-width="1"/>',
        f'<line x1="{_f(c)}" y1="0" x2="{_f(c)}" y2="{size}" '
        f'stroke="#dddddd" stroke-width="1"/>',
        f'<polygon points="{_poly_points(front.d_hull, c, c, scale)}" '
        f'fill="none" stroke="#1f77b4" stroke-width="2"/>',
        f'<polygon points="{_poly_points(front.s_polygon, c, c, scale)}" '
        f'fill="none" stroke="#d62728" stroke-width="2"/>',
    ]
    for corner in front.corners:
        x, y = corner.vertex
        parts.append(
            f'<circle cx="{_f(c + scale * x)}" cy="{_f(c - scale * y)}" '
            f'r="4" fill="#ff7f0e"><title>q={corner.q[0]},{corner.q[1]} '
            f'angle={_f(corner.angle_deg)}</title></circle>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_PATH_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_paths_svg(field, paths: Sequence, size: int = _SIZE,
                     cells_res: int = 4) -> str:
    """Lattice paths over a grayscale heatmap of the speed field.

    The viewport covers the bounding box of all path nodes padded by one
    unit cell; the heatmap samples ``cells_res`` texels per unit cell.
    """
    if not paths:
        raise ValueError("need at least one path")
    h = paths[0].h
    all_nodes = np.concatenate([p.nodes for p in paths], axis=0)
    lo = np.floor(all_nodes.min(axis=0) * h).astype(int) - 1
    hi = np.ceil(all_nodes.max(axis=0) * h).astype(int) + 1
    span = max(int(hi[0] - lo[0]), int(hi[1] - lo[1]))
    scale = (size - 40) / span
    ox, oy = 20.0, 20.0

    def sx(x):
        return ox + scale * (x - lo[0])

    def sy(y):
        return size - oy - scale * (y - lo[1])

    amin, amax = field.extrema()
    spread = amax - amin if amax > amin else 1.0
    nx = (hi[0] - lo[0]) * cells_res
    ny = (hi[1] - lo[1]) * cells_res
    xs = lo[0] + (np.arange(nx) + 0.5) / cells_res
    ys = lo[1] + (np.arange(ny) + 0.5) / cells_res
    vals = field.sample_many(xs[:, None], ys[None, :])
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    texel = scale / cells_res
    for i in range(nx):
        for j in range(ny):
            shade = int(round(235 - 110 * (vals[i, j] - amin) / spread))
            x0 = sx(lo[0] + i / cells_res)
            y0 = sy(lo[1] + (j + 1) / cells_res)
            parts.append(
                f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(texel)}" '
                f'height="{_f(texel)}" fill="rgb({shade},{shade},{shade})"/>')
    for k, p in enumerate(paths):
        color = _PATH_COLORS[k % len(_PATH_COLORS)]
        pts = " ".join(f"{_f(sx(n[0] * h))},{_f(sy(n[1] * h))}"
                       for n in p.nodes)
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
