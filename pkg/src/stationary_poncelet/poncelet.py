"""Poncelet polygon chasing between an outer ellipse and a caustic conic."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import conic_core as cc
from .errors import (
    CausticNotInterior,
    MaxIterations,
    NoSecondIntersection,
    NoSignChange,
    NotAnEllipse,
    NotAPorism,
    PointInside,
    PointOnConic,
    VertexOnCaustic,
)

TWO_PI = 2 * math.pi
CLOSURE_TOL = 1e-9
DEGENERATE_START = 1e-8


@dataclass(frozen=True, eq=False)
class ConicPair:
    outer: cc.AxisEllipse
    caustic: np.ndarray
    caustic_center: tuple | None = None
    known_foci: tuple | None = None
    outer_matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        caustic = cc.normalize_conic(self.caustic)
        object.__setattr__(self, "caustic", caustic)
        object.__setattr__(self, "outer_matrix", cc.normalize_conic(cc.matrix_of(self.outer)))
        try:
            shape = cc.classify(caustic)
        except NotAnEllipse as exc:
            raise CausticNotInterior(f"caustic is not an ellipse: {exc}") from None
        if self.caustic_center is None:
            object.__setattr__(self, "caustic_center", shape.center)
        if any(not cc.is_inside(self.outer_matrix, q) for q in shape.points(64)):
            raise CausticNotInterior("caustic is not strictly inside the outer ellipse")

    @property
    def scale(self) -> float:
        return self.outer.scale

    @property
    def caustic_shape(self) -> cc.GeneralEllipse:
        return cc.classify(self.caustic)


@dataclass(frozen=True, eq=False)
class PolygonSample:
    vertices: np.ndarray
    t: float

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class ClosureSearchResult:
    caustic: np.ndarray
    parameter: float
    max_defect: float
    pair: ConicPair | None = None


def _direction_gap(l1, l2) -> float:
    """|sin| of the angle between two lines."""
    return abs(l1[0] * l2[1] - l1[1] * l2[0]) / (math.hypot(l1[0], l1[1]) * math.hypot(l2[0], l2[1]))


def next_vertex(p, pair: ConicPair, incoming=None, orientation: int = 1):
    """One Poncelet step: the next outer vertex and the edge line used.

    Of the two tangents from ``p`` to the caustic, the one differing from
    ``incoming`` is taken. Without an incoming edge the tangent whose contact
    point lies counterclockwise of ``p`` about the caustic centre is taken
    (clockwise when ``orientation`` is -1).
    """
    p = np.asarray(p, dtype=float)
    try:
        lines = cc.tangents_from(p, pair.caustic)
    except (PointOnConic, PointInside) as exc:
        raise VertexOnCaustic(str(exc)) from None
    if incoming is not None:
        gaps = [_direction_gap(l, incoming) for l in lines]
        line = lines[int(np.argmax(gaps))]
    else:
        k = np.asarray(pair.caustic_center)
        for line in lines:
            touch = cc.pole(line, pair.caustic)
            turn = (p[0] - k[0]) * (touch[1] - k[1]) - (p[1] - k[1]) * (touch[0] - k[0])
            if turn * orientation > 0:
                break
    p0, d, (qa, qb, qc) = cc.line_quadratic(line, pair.outer_matrix)
    disc = max(qb * qb - qa * qc, 0.0)
    if disc <= (cc.ROOT_TOL * qa) ** 2:
        raise NoSecondIntersection(f"edge through {p} only touches the outer conic")
    root = math.sqrt(disc)
    # the root nearest p is the current vertex; keep the other one
    s_far = (-qb + root) / qa
    s_near = (-qb - root) / qa
    s_p = float((p - p0) @ d)
    s = s_far if abs(s_near - s_p) < abs(s_far - s_p) else s_near
    return p0 + s * d, line


def walk(pair: ConicPair, start, steps: int, orientation: int = 1):
    """Vertices visited by ``steps`` Poncelet steps, start included."""
    pts = [np.asarray(start, dtype=float)]
    line = None
    for _ in range(steps):
        q, line = next_vertex(pts[-1], pair, line, orientation)
        pts.append(q)
    return np.array(pts)


def chase(pair: ConicPair, t: float, n: int, orientation: int = 1) -> PolygonSample:
    if n < 3:
        raise ValueError("n must be at least 3")
    pts = walk(pair, pair.outer.point(t), n - 1, orientation)
    return PolygonSample(pts, float(t))


def closure_defect(pair: ConicPair, t: float, n: int) -> float:
    pts = walk(pair, pair.outer.point(t), n)
    return float(np.linalg.norm(pts[-1] - pts[0]))


def angular_defect(pair: ConicPair, t: float, n: int, turns: int = 1) -> float:
    """Signed excess of the outer parameter swept in n steps over 2*pi*turns."""
    pts = walk(pair, pair.outer.point(t), n)
    params = [pair.outer.parameter(q) for q in pts]
    swept = sum((b - a) % TWO_PI for a, b in zip(params, params[1:]))
    return swept - TWO_PI * turns


def probe_parameters(count: int, offset: float = 0.0):
    return offset + TWO_PI * np.arange(count) / count


def max_closure_defect(pair: ConicPair, n: int, probes: int = 16) -> float:
    return max(closure_defect(pair, t, n) for t in probe_parameters(probes, 0.1))


def certify(pair: ConicPair, n: int, probes: int = 16, tol: float = CLOSURE_TOL) -> float:
    """Raise NotAPorism unless closure holds at every probe start."""
    worst = max_closure_defect(pair, n, probes)
    if not worst < tol * pair.scale:
        raise NotAPorism(f"max closure defect {worst:.3e} over {probes} starts exceeds "
                         f"{tol * pair.scale:.1e}", worst)
    return worst


def _start_parameter(pair: ConicPair, t: float) -> float:
    # tangent splitting degenerates when the start vertex touches the caustic
    for _ in range(100):
        if cc.approx_distance(pair.caustic, pair.outer.point(t)) > DEGENERATE_START * pair.scale:
            return t
        t += 1e-3
    raise VertexOnCaustic("no valid start parameter near t")


def sample_family(pair: ConicPair, n: int, count: int, tol: float = CLOSURE_TOL):
    """``count`` polygons at uniform starts in [0, 2*pi), ordered by t."""
    certify(pair, n, 16, tol)
    return [chase(pair, _start_parameter(pair, t), n) for t in probe_parameters(count)]


def _caustic_candidate(center, size, focus=None, aspect=1.0):
    center = np.asarray(center, dtype=float)
    if focus is None:
        return cc.matrix_of(cc.AxisEllipse(size, size * aspect, center))
    off = center - np.asarray(focus, dtype=float)
    f = float(np.linalg.norm(off))
    minor = math.sqrt(max(size * size - f * f, 0.0))
    rot = math.atan2(off[1], off[0]) if f > 0 else 0.0
    return cc.matrix_of(cc.GeneralEllipse(center, size, minor, rot))


def search_caustic_ngon(outer: cc.AxisEllipse, center, n: int, focus=None, aspect: float = 1.0,
                        tol: float = CLOSURE_TOL, seed: int = 0) -> ClosureSearchResult:
    """Find a caustic with the given centre closing Poncelet n-gons in ``outer``.

    With ``focus`` one focus of the caustic is pinned there and the semi-major
    axis is the free parameter; otherwise the caustic is axis-aligned with the
    given aspect ratio (minor/major along y/x) and its x semi-axis is free.
    The mean signed angular defect over eight probe starts is driven to zero
    by bracketing root finding.
    """
    center = np.asarray(center, dtype=float)
    if not cc.is_inside(cc.matrix_of(outer), center):
        raise ValueError("caustic centre must lie inside the outer conic")
    if n < 3:
        raise ValueError("n must be at least 3")
    f = 0.0 if focus is None else float(np.linalg.norm(center - np.asarray(focus, dtype=float)))
    probes = probe_parameters(8, 0.1)

    def make_pair(size):
        return ConicPair(outer, _caustic_candidate(center, size, focus, aspect), tuple(center))

    def mean_defect(size):
        pair = make_pair(size)
        return float(np.mean([angular_defect(pair, t, n) for t in probes]))

    grid = f + 2 * outer.scale * np.arange(1, 65) / 64
    values = []
    for size in grid:
        try:
            values.append((size, mean_defect(size)))
        except (CausticNotInterior, VertexOnCaustic, NoSecondIntersection):
            continue
    bracket = None
    for (s0, v0), (s1, v1) in zip(values, values[1:]):
        if v0 == 0:
            bracket = (s0, s0)
            break
        if v0 * v1 < 0:
            bracket = (s0, s1)
            break
    if bracket is None:
        raise NoSignChange(f"closure defect does not change sign for n={n}")
    if bracket[0] == bracket[1]:
        size = bracket[0]
    else:
        size, info = brentq(mean_defect, *bracket, xtol=1e-15, rtol=1e-15, maxiter=200,
                            full_output=True)
        if not info.converged:
            raise MaxIterations("caustic search did not converge")
    pair = make_pair(size)
    rng = np.random.default_rng(seed)
    worst = max(closure_defect(pair, t, n) for t in rng.uniform(0, TWO_PI, 32))
    if not worst < tol * outer.scale:
        raise MaxIterations(f"caustic found but closure defect {worst:.3e} exceeds tolerance")
    return ClosureSearchResult(pair.caustic, float(size), float(worst), pair)
