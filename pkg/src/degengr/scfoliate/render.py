"""SVG and CSV output for polyline sets.

Output depends only on the input numbers: coordinates are written with a
fixed number of decimals and nothing time- or environment-dependent is
emitted, so identical inputs give identical bytes.
"""
from __future__ import annotations

import numpy as np

from .mapping import PolylineSet

SVG_DECIMALS = 5
MARGIN = 0.05
WIDTH_PX = 600

_STYLE = {
    "leaf": 'stroke="#1f5fa8" stroke-width="{w}"',
    "boundary": 'stroke="#000000" stroke-width="{w2}"',
    "vertex": 'stroke="#c0392b" stroke-width="{w3}"',
}


def _num(x: float) -> str:
    s = f"{x:.{SVG_DECIMALS}f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def _path_data(points: np.ndarray) -> str:
    xy = [(_num(p.real), _num(-p.imag)) for p in points]
    if len(xy) == 1:
        xy = xy * 2  # zero-length segment; round caps draw it as a dot
    head = f"M {xy[0][0]} {xy[0][1]}"
    return " ".join([head] + [f"L {x} {y}" for x, y in xy[1:]])


def render_svg(ps: PolylineSet) -> bytes:
    pts = ps.all_points()
    if pts.size:
        xmin, xmax = float(pts.real.min()), float(pts.real.max())
        ymin, ymax = float(-pts.imag.max()), float(-pts.imag.min())
    else:
        xmin, xmax, ymin, ymax = 0.0, 1.0, 0.0, 1.0
    w, h = max(xmax - xmin, 1e-9), max(ymax - ymin, 1e-9)
    size = max(w, h)
    pad = MARGIN * size
    vb = (xmin - pad, ymin - pad, w + 2 * pad, h + 2 * pad)
    height_px = WIDTH_PX * vb[3] / vb[2]
    widths = {"w": _num(0.004 * size), "w2": _num(0.008 * size), "w3": _num(0.02 * size)}
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH_PX}" height="{height_px:.0f}" '
        f'viewBox="{" ".join(_num(v) for v in vb)}">',
        '<g fill="none" stroke-linecap="round" stroke-linejoin="round">',
    ]
    for pl in ps.polylines:
        if not len(pl.points):
            continue
        style = _STYLE[pl.kind].format(**widths)
        lines.append(f'<path class="{pl.kind}" {style} d="{_path_data(pl.points)}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines).encode("utf-8")


def render_csv(ps: PolylineSet) -> bytes:
    rows = ["label,index,re,im"]
    for pl in ps.polylines:
        for i, p in enumerate(pl.points):
            rows.append(f"{pl.label},{i},{p.real:.12g},{p.imag:.12g}")
    rows.append("")
    return "\n".join(rows).encode("utf-8")


def render(ps: PolylineSet, fmt: str) -> bytes:
    if fmt == "svg":
        return render_svg(ps)
    if fmt == "csv":
        return render_csv(ps)
    raise ValueError(f"unknown format {fmt!r}; use svg or csv")
