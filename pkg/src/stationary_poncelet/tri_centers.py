"""Triangle metrics, Kimberling centers, derived triangles and special circles.

A triangle is any array-like of shape (3, 2) with vertices A, B, C; side
``l1 = |BC|``, ``l2 = |CA|``, ``l3 = |AB|`` and ``theta_i`` is the angle at the
i-th vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conic_core as cc
from .errors import (
    DegenerateAdams,
    DegenerateTriangle,
    OnSideline,
    PointAtInfinity,
    PoleAtInfinity,
    SelfIntersecting,
    UnsupportedCenter,
)

CENTER_INDICES = (1, 2, 3, 4, 5, 6, 7, 8, 10, 20, 354)
CENTROIDS = ("C0", "C1", "C2")


@dataclass(frozen=True)
class TriangleMetrics:
    l1: float
    l2: float
    l3: float
    s: float
    area: float
    R: float
    r: float
    theta1: float
    theta2: float
    theta3: float

    @property
    def sides(self):
        return np.array([self.l1, self.l2, self.l3])

    @property
    def angles(self):
        return np.array([self.theta1, self.theta2, self.theta3])


def as_triangle(tri):
    tri = np.asarray(tri, dtype=float)
    if tri.shape != (3, 2):
        raise ValueError(f"triangle must have shape (3, 2), got {tri.shape}")
    return tri


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def signed_area(tri) -> float:
    a, b, c = as_triangle(tri)
    return 0.5 * _cross(b - a, c - a)


def side_lengths(tri):
    a, b, c = as_triangle(tri)
    return np.array([np.linalg.norm(c - b), np.linalg.norm(a - c), np.linalg.norm(b - a)])


def metrics(tri) -> TriangleMetrics:
    tri = as_triangle(tri)
    l1, l2, l3 = map(float, side_lengths(tri))
    area = abs(float(signed_area(tri)))
    if area <= 1e-14 * max(l1, l2, l3) ** 2:
        raise DegenerateTriangle("triangle has (near) zero area")
    s = 0.5 * (l1 + l2 + l3)
    # cosine law for the cosine, area for the sine
    thetas = []
    for x, y, z in ((l1, l2, l3), (l2, l3, l1), (l3, l1, l2)):
        thetas.append(math.atan2(2 * area / (y * z), (y * y + z * z - x * x) / (2 * y * z)))
    return TriangleMetrics(l1, l2, l3, s, area, l1 * l2 * l3 / (4 * area), area / s, *thetas)


def barycentric_point(tri, z):
    tri = as_triangle(tri)
    z = np.asarray(z, dtype=float)
    total = z.sum()
    if abs(total) <= 1e-14 * np.abs(z).max():
        raise PointAtInfinity(f"barycentrics {z} sum to zero")
    return z @ tri / total


def to_barycentrics(tri, p):
    """Normalised barycentrics of a Cartesian point (signed sub-areas)."""
    a, b, c = as_triangle(tri)
    p = np.asarray(p, dtype=float)
    z = np.array([_cross(b - p, c - p), _cross(c - p, a - p), _cross(a - p, b - p)])
    return z / z.sum()


def _barycentrics(m: TriangleMetrics, k: int):
    l = m.sides
    lj, lk = np.roll(l, -1), np.roll(l, -2)
    sq, sqj, sqk = l * l, lj * lj, lk * lk
    conway = 0.5 * (sqj + sqk - sq)
    table = {
        1: lambda: l,
        2: lambda: np.ones(3),
        3: lambda: sq * (sqj + sqk - sq),
        4: lambda: np.roll(conway, -1) * np.roll(conway, -2),
        5: lambda: sq * (sqj + sqk) - (sqj - sqk) ** 2,
        6: lambda: sq,
        7: lambda: (m.s - lj) * (m.s - lk),
        8: lambda: m.s - l,
        10: lambda: lj + lk,
    }
    if k not in table:
        raise UnsupportedCenter(f"X{k} has no barycentric formula here")
    return table[k]()


def center(tri, k, m: TriangleMetrics | None = None):
    """Cartesian position of Kimberling center X_k."""
    tri = as_triangle(tri)
    if k not in CENTER_INDICES:
        raise UnsupportedCenter(f"unsupported center X{k}")
    if m is None:
        m = metrics(tri)
    if k == 20:
        return 2 * center(tri, 3, m) - center(tri, 4, m)
    if k == 354:
        return center(intouch_triangle(tri), 2)
    return barycentric_point(tri, _barycentrics(m, k))


def isogonal_conjugate(tri, p):
    tri = as_triangle(tri)
    z = to_barycentrics(tri, p)
    if np.any(np.abs(z) < 1e-13):
        raise OnSideline(f"point {p} lies on a sideline")
    return barycentric_point(tri, side_lengths(tri) ** 2 / z)


def intouch_triangle(tri):
    """Contact points of the incircle on BC, CA, AB (in that order)."""
    a, b, c = as_triangle(tri)
    m = metrics(tri)
    return np.array([
        b + (m.s - m.l2) / m.l1 * (c - b),
        c + (m.s - m.l3) / m.l2 * (a - c),
        a + (m.s - m.l1) / m.l3 * (b - a),
    ])


def polar_polygon(vertices, conic):
    """Vertex i of the image is the pole of edge (i, i+1)."""
    pts = np.asarray(vertices, dtype=float)
    out = []
    for p, q in zip(pts, np.roll(pts, -1, axis=0)):
        try:
            out.append(cc.pole(cc.join(p, q), conic))
        except PointAtInfinity:
            raise PoleAtInfinity(f"sideline through {p}, {q} passes through the conic center") from None
    return np.array(out)


def polar_triangle(tri, conic):
    """Triangle of the poles of BC, CA, AB; vertex i is opposite vertex i."""
    return np.roll(polar_polygon(as_triangle(tri), conic), -1, axis=0)


def polar_circle_sq(m: TriangleMetrics) -> float:
    return 4 * m.R ** 2 - float(np.sum(m.sides ** 2)) / 2


def adams_radius(m: TriangleMetrics) -> float:
    l1, l2, l3 = m.sides
    rho = l1 * l2 + l2 * l3 + l3 * l1
    den = rho - m.s ** 2
    if abs(den) <= 1e-14 * rho:
        raise DegenerateAdams("rho equals s^2")
    radicand = rho ** 2 - l1 * l2 * l3 * m.s - rho * m.s ** 2
    if radicand < 0:
        if radicand < -1e-12 * rho ** 2:
            raise DegenerateAdams(f"negative radicand {radicand:.3e}")
        radicand = 0.0
    return m.r * math.sqrt(radicand) / den


def dist_sq_x1_x2(m: TriangleMetrics) -> float:
    l1, l2, l3 = m.sides
    mixed = l2 * l1 ** 2 + l3 * l1 ** 2 + l2 ** 2 * l1 + l3 ** 2 * l1 + l2 * l3 ** 2 + l2 ** 2 * l3
    return -(l1 ** 3 + l2 ** 3 + l3 ** 3 + 9 * l1 * l2 * l3 - 2 * mixed) / (9 * (l1 + l2 + l3))


def dist_sq_x1_x4(m: TriangleMetrics) -> float:
    return 2 * m.r ** 2 + polar_circle_sq(m)


def dist_sq_x1_x7(m: TriangleMetrics) -> float:
    return m.r ** 2 * (1 - 3 * m.s ** 2 / (m.r + 4 * m.R) ** 2)


def angle_sums(m: TriangleMetrics) -> dict:
    th = m.angles
    return {
        "sinHalfSum": float(np.sum(np.sin(th / 2))),
        "tanHalfSum": float(np.sum(np.tan(th / 2))),
        "cos2Sum": float(np.sum(np.cos(2 * th))),
        "cosSum": float(np.sum(np.cos(th))),
        "cosProd": float(np.prod(np.cos(th))),
    }


def polygon_angles(vertices):
    """Interior angles of a convex polygon, in vertex order."""
    pts = np.asarray(vertices, dtype=float)
    prev = np.roll(pts, 1, axis=0) - pts
    nxt = np.roll(pts, -1, axis=0) - pts
    cross = np.abs(prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0])
    return np.arctan2(cross, np.sum(prev * nxt, axis=1))


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1 = _cross(p2 - p1, q1 - p1)
    d2 = _cross(p2 - p1, q2 - p1)
    d3 = _cross(q2 - q1, p1 - q1)
    d4 = _cross(q2 - q1, p2 - q1)
    return d1 * d2 < 0 and d3 * d4 < 0


def is_simple(vertices) -> bool:
    pts = np.asarray(vertices, dtype=float)
    n = len(pts)
    edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return False
    return True


def ngon_centroids(vertices) -> dict:
    """Vertex (C0), perimeter (C1) and area (C2) centroids of a simple polygon."""
    pts = np.asarray(vertices, dtype=float)
    if not is_simple(pts):
        raise SelfIntersecting("polygon is self-intersecting")
    nxt = np.roll(pts, -1, axis=0)
    lengths = np.linalg.norm(nxt - pts, axis=1)
    c1 = lengths @ (0.5 * (pts + nxt)) / lengths.sum()
    w = pts[:, 0] * nxt[:, 1] - nxt[:, 0] * pts[:, 1]
    c2 = w @ (pts + nxt) / (3 * w.sum())
    return {"C0": pts.mean(axis=0), "C1": c1, "C2": c2}


def point_of(vertices, cid, m: TriangleMetrics | None = None):
    """Named point of a polygon: a Kimberling index (triangles) or C0/C1/C2."""
    if cid in CENTROIDS:
        return ngon_centroids(vertices)[cid]
    if len(vertices) != 3:
        raise UnsupportedCenter(f"X{cid} is defined for triangles only")
    return center(vertices, cid, m)
