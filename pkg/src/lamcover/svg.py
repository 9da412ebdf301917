"""Deterministic SVG export of regions, partitions, envelope overlays, and
developed images.

Element order follows sorted triangle ids and all numbers use a fixed
format, so identical inputs produce byte-identical SVG.
"""

from __future__ import annotations

import math
from typing import Dict, Optional

from .complexes import Region, TriangulatedComplex

# a small qualitative palette, cycled per class
_PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2",
            "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]

_STYLES = {
    "region": "fill:#4e79a7;fill-opacity:0.85;stroke:#1b3a5a;stroke-width:0.01",
    "filled": "fill:#f28e2b;fill-opacity:0.85;stroke:#8a4d0f;stroke-width:0.01",
    "complement": "fill:#d7d7d7;fill-opacity:0.6;stroke:#9a9a9a;stroke-width:0.005",
}


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _poly(points, style) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return f'<polygon points="{pts}" style="{style}" />'


def _canvas(xs, ys, body, scale: float) -> str:
    if not xs:
        return ('<svg xmlns="http://www.w3.org/2000/svg" '
                'width="0" height="0"></svg>\n')
    pad = 0.5
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    w, h = (x1 - x0) * scale, (y1 - y0) * scale
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{_fmt(w)}" height="{_fmt(h)}" '
            f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">')
    # flip the y axis so mathematical orientation reads upward
    return (head + f'<g transform="scale(1,-1)">'
            + "".join(body) + "</g></svg>\n")


def _tri_points(host, t, coords=None):
    if coords is None:
        return [host.coord_float(v) for v in host.triangles[t]]
    return [coords[v] for v in host.triangles[t]]


def render_region(R: Region, *, scale: float = 40.0,
                  classes: Optional[Dict[int, object]] = None) -> str:
    """Region triangles over a grey host; `classes` maps triangle ids to
    class labels for per-class coloring."""
    host = R.host
    body = []
    xs, ys = [], []
    for t in sorted(host.triangles):
        pts = _tri_points(host, t)
        xs += [x for x, _ in pts]
        ys += [y for _, y in pts]
        if t not in R.triangles:
            body.append(_poly(pts, _STYLES["complement"]))
    labels = sorted({classes[t] for t in R.triangles if t in classes},
                    key=repr) if classes else []
    color_of = {c: _PALETTE[i % len(_PALETTE)] for i, c in enumerate(labels)}
    for t in sorted(R.triangles):
        pts = _tri_points(host, t)
        if classes and t in classes:
            fill = color_of[classes[t]]
            style = (f"fill:{fill};fill-opacity:0.85;"
                     "stroke:#333333;stroke-width:0.01")
        else:
            style = _STYLES["region"]
        body.append(_poly(pts, style))
    return _canvas(xs, ys, body, scale)


def render_envelope_overlay(R: Region, envelope_region: Region, *,
                            scale: float = 40.0) -> str:
    """Three style classes: the region itself, the filled holes, and the
    untouched complement."""
    host = R.host
    filled = envelope_region.triangles - R.triangles
    body = []
    xs, ys = [], []
    for t in sorted(host.triangles):
        pts = _tri_points(host, t)
        xs += [x for x, _ in pts]
        ys += [y for _, y in pts]
        if t in R.triangles:
            style = _STYLES["region"]
        elif t in filled:
            style = _STYLES["filled"]
        else:
            style = _STYLES["complement"]
        body.append(_poly(pts, style))
    return _canvas(xs, ys, body, scale)


def render_development(dev, *, scale: float = 40.0, grid: bool = True) -> str:
    """Developed image with the unit lattice overlaid."""
    host = dev.domain.host
    body = []
    xs, ys = [], []
    for t in sorted(dev.domain.triangles):
        pts = _tri_points(host, t, dev.coords)
        xs += [x for x, _ in pts]
        ys += [y for _, y in pts]
        body.append(_poly(pts, _STYLES["region"]))
    grid_lines = []
    if grid and xs:
        x0, x1 = math.floor(min(xs)), math.ceil(max(xs))
        y0, y1 = math.floor(min(ys)), math.ceil(max(ys))
        sty = "stroke:#222222;stroke-width:0.02;stroke-dasharray:0.1,0.1"
        for i in range(x0, x1 + 1):
            grid_lines.append(
                f'<line x1="{_fmt(i)}" y1="{_fmt(y0)}" '
                f'x2="{_fmt(i)}" y2="{_fmt(y1)}" style="{sty}" />')
        for j in range(y0, y1 + 1):
            grid_lines.append(
                f'<line x1="{_fmt(x0)}" y1="{_fmt(j)}" '
                f'x2="{_fmt(x1)}" y2="{_fmt(j)}" style="{sty}" />')
    return _canvas(xs, ys, body + grid_lines, scale)
