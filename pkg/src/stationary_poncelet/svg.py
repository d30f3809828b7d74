"""Static SVG drawings of a family, optionally with one center's locus.

Output is a pure function of its inputs: elements are emitted in a fixed
order and every coordinate is printed with the same fixed precision.
"""
from __future__ import annotations

import numpy as np

from . import conic_core as cc

CURVE_POINTS = 256
PAD = 0.10
STYLE = {
    "outer": 'fill="none" stroke="#222222"',
    "caustic": 'fill="none" stroke="#1f77b4"',
    "polygon": 'fill="none" stroke="#999999"',
    "locus": 'fill="#d62728" stroke="none"',
    "fitted": 'fill="none" stroke="#d62728" stroke-dasharray="4 3"',
    "focus": 'fill="none" stroke="#2ca02c"',
}


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pts(points) -> str:
    # y is flipped so the drawing uses the usual mathematical orientation
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in points)


def _curve(e: cc.GeneralEllipse) -> np.ndarray:
    return e.points(CURVE_POINTS)


def view_box(outer: cc.AxisEllipse) -> tuple[float, float, float, float]:
    """Outer conic bounding box padded by 10% on every side (y flipped)."""
    cx, cy = outer.center
    w, h = 2 * outer.a, 2 * outer.b
    px, py = PAD * w, PAD * h
    return (cx - outer.a - px, -(cy + outer.b) - py, w + 2 * px, h + 2 * py)


def render(pair, polygons=(), every: int = 4, locus=None, foci=()) -> str:
    """SVG text for the outer conic, caustic, every ``every``-th polygon and,
    when given, the locus points, its fitted ellipse and claimed-focus markers."""
    outer_e = cc.classify(cc.matrix_of(pair.outer))
    vb = view_box(pair.outer)
    stroke = _fmt(0.004 * max(vb[2], vb[3]))
    dot = _fmt(0.006 * max(vb[2], vb[3]))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{" ".join(_fmt(v) for v in vb)}" '
        'width="800" height="{:d}">'.format(max(1, round(800 * vb[3] / vb[2]))),
        f'<g stroke-width="{stroke}">',
        f'<polygon id="outer" {STYLE["outer"]} points="{_pts(_curve(outer_e))}"/>',
        f'<polygon id="caustic" {STYLE["caustic"]} points="{_pts(_curve(pair.caustic_shape))}"/>',
    ]
    for i, poly in enumerate(list(polygons)[::max(1, every)]):
        lines.append(f'<polygon class="polygon" data-index="{i}" {STYLE["polygon"]} '
                     f'points="{_pts(np.asarray(poly))}"/>')
    if locus is not None:
        for x, y in np.asarray(locus.points):
            lines.append(f'<circle class="locus" {STYLE["locus"]} cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{dot}"/>')
        if locus.fitted is not None:
            lines.append(f'<polygon id="fitted" {STYLE["fitted"]} points="{_pts(_curve(locus.fitted))}"/>')
    for x, y in foci:
        lines.append(f'<circle class="focus" {STYLE["focus"]} cx="{_fmt(x)}" cy="{_fmt(-y)}" '
                     f'r="{_fmt(2.5 * float(dot))}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)
