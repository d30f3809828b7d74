"""Projective conic algebra on 3x3 symmetric matrices.

Points are numpy arrays of shape ``(2,)``; homogeneous points and lines are
arrays of shape ``(3,)``; a line ``(u, v, w)`` is the set ``u*x + v*y + w = 0``.
A conic is a symmetric 3x3 matrix ``C`` with ``p^T C p = 0`` on the curve,
defined up to a nonzero scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFit,
    LineAtInfinity,
    NotAnEllipse,
    PointAtInfinity,
    PointInside,
    PointOnConic,
    SingularConic,
    SingularMap,
)

ROOT_TOL = 1e-12
GEOM_TOL = 1e-10


def _pair(p) -> tuple[float, float]:
    x, y = p
    return (float(x), float(y))


@dataclass(frozen=True)
class AxisEllipse:
    """Axis-aligned ellipse ((x-cx)/a)^2 + ((y-cy)/b)^2 = 1."""

    a: float
    b: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"semi-axes must be positive, got a={self.a}, b={self.b}")
        object.__setattr__(self, "center", _pair(self.center))

    @property
    def scale(self) -> float:
        return max(self.a, self.b)

    def point(self, t):
        cx, cy = self.center
        return np.array([cx + self.a * math.cos(t), cy + self.b * math.sin(t)])

    def parameter(self, p) -> float:
        cx, cy = self.center
        return math.atan2((p[1] - cy) / self.b, (p[0] - cx) / self.a)


@dataclass(frozen=True)
class GeneralEllipse:
    center: tuple[float, float]
    semi_major: float
    semi_minor: float
    rotation: float = 0.0

    def __post_init__(self):
        if not (self.semi_major >= self.semi_minor > 0):
            raise ValueError("need semi_major >= semi_minor > 0")
        object.__setattr__(self, "center", _pair(self.center))
        object.__setattr__(self, "rotation", float(self.rotation) % math.pi)

    @property
    def major_direction(self):
        return np.array([math.cos(self.rotation), math.sin(self.rotation)])

    def point(self, t):
        u = self.major_direction
        v = np.array([-u[1], u[0]])
        return (np.asarray(self.center) + self.semi_major * math.cos(t) * u
                + self.semi_minor * math.sin(t) * v)

    def points(self, count: int):
        return np.array([self.point(2 * math.pi * k / count) for k in range(count)])


@dataclass(frozen=True)
class AffineMap:
    """p -> linear @ p + translation."""

    linear: tuple = ((1.0, 0.0), (0.0, 1.0))
    translation: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float)
        if lin.shape != (2, 2):
            raise ValueError("linear part must be 2x2")
        object.__setattr__(self, "linear", tuple(map(tuple, lin.tolist())))
        object.__setattr__(self, "translation", _pair(self.translation))

    @property
    def homogeneous(self):
        h = np.eye(3)
        h[:2, :2] = self.linear
        h[:2, 2] = self.translation
        return h

    def inverse(self) -> "AffineMap":
        lin = np.asarray(self.linear)
        if abs(np.linalg.det(lin)) < ROOT_TOL:
            raise SingularMap("affine map is singular")
        inv = np.linalg.inv(lin)
        return AffineMap(inv, -inv @ np.asarray(self.translation))


def homog(p):
    return np.array([p[0], p[1], 1.0])


def dehomog(h, tol=ROOT_TOL):
    h = np.asarray(h, dtype=float)
    if abs(h[2]) <= tol * max(abs(h[0]), abs(h[1])):
        raise PointAtInfinity(f"homogeneous point {h} is at infinity")
    return h[:2] / h[2]


def cross3(u, v):
    """Cross product of two 3-vectors (np.cross has heavy per-call overhead)."""
    return np.array([u[1] * v[2] - u[2] * v[1],
                     u[2] * v[0] - u[0] * v[2],
                     u[0] * v[1] - u[1] * v[0]])


def join(p, q):
    """Line through two Cartesian points."""
    return cross3(homog(p), homog(q))


def meet(l, m):
    return dehomog(cross3(l, m))


def adjugate(m):
    m = np.asarray(m, dtype=float)
    c0, c1, c2 = m.T
    # rows of the adjugate are cross products of column pairs
    return np.array([cross3(c1, c2), cross3(c2, c0), cross3(c0, c1)])


def normalize_conic(c):
    """Scale to unit Frobenius norm, oriented so that the quadratic block has
    positive trace (for an ellipse: negative inside, positive outside)."""
    c = np.asarray(c, dtype=float)
    c = 0.5 * (c + c.T)
    norm = np.linalg.norm(c)
    if norm == 0:
        raise SingularConic("zero conic")
    c = c / norm
    if np.trace(c[:2, :2]) < 0:
        c = -c
    return c


def matrix_of(e) -> np.ndarray:
    """Conic matrix of an AxisEllipse or GeneralEllipse."""
    if isinstance(e, AxisEllipse):
        e = GeneralEllipse(e.center, max(e.a, e.b), min(e.a, e.b),
                           0.0 if e.a >= e.b else math.pi / 2)
    u = e.major_direction
    v = np.array([-u[1], u[0]])
    q = np.outer(u, u) / e.semi_major ** 2 + np.outer(v, v) / e.semi_minor ** 2
    ctr = np.asarray(e.center)
    m = np.empty((3, 3))
    m[:2, :2] = q
    m[:2, 2] = m[2, :2] = -q @ ctr
    m[2, 2] = ctr @ q @ ctr - 1.0
    return m


def circle_matrix(center, radius) -> np.ndarray:
    return matrix_of(AxisEllipse(radius, radius, center))


def conic_value(c, p) -> float:
    h = homog(p)
    return float(h @ np.asarray(c) @ h)


def approx_distance(c, p) -> float:
    """First-order (Sampson) distance from p to the conic."""
    c = np.asarray(c, dtype=float)
    h = homog(p)
    grad = 2.0 * (c[:2, :] @ h)
    return abs(float(h @ c @ h)) / max(np.linalg.norm(grad), 1e-300)


def is_inside(c, p) -> bool:
    return conic_value(normalize_conic(c), p) < 0


def classify(c) -> GeneralEllipse:
    c = normalize_conic(c)
    q = c[:2, :2]
    g = c[:2, 2]
    if np.linalg.det(q) <= ROOT_TOL * np.trace(q) ** 2:
        raise NotAnEllipse("quadratic part is not definite")
    ctr = -np.linalg.solve(q, g)
    f0 = c[2, 2] + g @ ctr
    if f0 >= 0:
        raise NotAnEllipse("conic has no real points")
    evals, evecs = np.linalg.eigh(q)
    # eigh sorts ascending: the smaller eigenvalue belongs to the major axis
    axes = np.sqrt(-f0 / evals)
    major = evecs[:, 0]
    if math.isclose(axes[0], axes[1], rel_tol=1e-12):
        rot = 0.0
    else:
        rot = math.atan2(major[1], major[0]) % math.pi
    return GeneralEllipse(ctr, float(axes[0]), float(axes[1]), rot)


def foci_of(e: GeneralEllipse):
    f = math.sqrt(max(e.semi_major ** 2 - e.semi_minor ** 2, 0.0))
    ctr = np.asarray(e.center)
    d = f * e.major_direction
    return ctr + d, ctr - d


def tangency_residual(line, c) -> float:
    """Scale-free |l^T adj(C) l|; zero iff the line touches the conic."""
    line = np.asarray(line, dtype=float)
    dual = adjugate(normalize_conic(c))
    return abs(float(line @ dual @ line)) / (np.linalg.norm(dual) * (line @ line))


def cross_matrix(p):
    return np.array([[0.0, -p[2], p[1]], [p[2], 0.0, -p[0]], [-p[1], p[0], 0.0]])


def split_degenerate(d, tol=ROOT_TOL):
    """Split a rank-2 symmetric matrix into its two real lines."""
    d = np.asarray(d, dtype=float)
    b = adjugate(d)
    i = int(np.argmax(np.abs(np.diag(b))))
    if abs(b[i, i]) <= tol * np.linalg.norm(d) ** 2:
        raise PointOnConic("degenerate conic is a double line")
    if b[i, i] > 0:
        raise PointInside("degenerate conic has no real lines")
    p = b[:, i] / math.sqrt(-b[i, i])
    rank_one = d + cross_matrix(p)
    j, k = np.unravel_index(np.argmax(np.abs(rank_one)), rank_one.shape)
    return rank_one[j, :].copy(), rank_one[:, k].copy()


def tangents_from(p, c):
    """The two tangent lines from an exterior point p to conic c."""
    c = normalize_conic(c)
    h = homog(p)
    cp = c @ h
    d = (h @ cp) * c - np.outer(cp, cp)
    try:
        l1, l2 = split_degenerate(d)
    except PointOnConic:
        raise PointOnConic(f"point {p} lies on the conic") from None
    except PointInside:
        raise PointInside(f"point {p} lies inside the conic") from None
    return _unit_line(l1), _unit_line(l2)


def _unit_line(line):
    n = math.hypot(line[0], line[1])
    if n == 0:
        raise LineAtInfinity("line at infinity")
    return np.asarray(line, dtype=float) / n


def line_quadratic(line, c):
    """Foot point, direction and coefficients (A, B, C) of
    A s^2 + 2 B s + C along the line p0 + s*d, with |d| = 1."""
    u, v, w = _unit_line(line)
    p0 = np.array([-w * u, -w * v])
    d = np.array([-v, u])
    c = np.asarray(c, dtype=float)
    h0 = homog(p0)
    hd = np.array([d[0], d[1], 0.0])
    return p0, d, (float(hd @ c @ hd), float(h0 @ c @ hd), float(h0 @ c @ h0))


def intersect_line_conic(line, c, scale=1.0):
    """Real intersections of a line and a proper conic (0, 1 or 2 points)."""
    p0, d, (qa, qb, qc) = line_quadratic(line, c)
    if abs(qa) < ROOT_TOL * (abs(qb) + abs(qc)):
        if qb == 0:
            return []
        return [p0 - qc / (2 * qb) * d]
    disc = qb * qb - qa * qc
    # disc / qa^2 is the squared half-chord
    if abs(disc) < GEOM_TOL * scale ** 2 * qa * qa:
        return [p0 - qb / qa * d]
    if disc < 0:
        return []
    root = math.sqrt(disc)
    far = -(qb + math.copysign(root, qb))
    s1, s2 = far / qa, qc / far
    return [p0 + s * d for s in sorted((s1, s2))]


def polar_line(p, c):
    return np.asarray(c, dtype=float) @ homog(p)


def pole(line, c):
    c = np.asarray(c, dtype=float)
    if abs(np.linalg.det(normalize_conic(c))) < ROOT_TOL:
        raise SingularConic("conic is degenerate")
    return dehomog(adjugate(c) @ np.asarray(line, dtype=float))


def fit_conic(points, full_output=False):
    """Algebraic least-squares conic through the points.

    Points are centred and scaled to unit RMS radius before the design matrix
    of monomials (x^2, xy, y^2, x, y, 1) is built; the right singular vector of
    the smallest singular value gives the conic. With ``full_output`` the RMS
    algebraic residual (in normalised coordinates) is returned as well.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 5:
        raise DegenerateFit("need at least five 2-D points")
    mean = pts.mean(axis=0)
    rms = math.sqrt(np.mean(np.sum((pts - mean) ** 2, axis=1)))
    if rms == 0:
        raise DegenerateFit("all points coincide")
    x, y = ((pts - mean) / rms).T
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, sv, vt = np.linalg.svd(design, full_matrices=False)
    if len(sv) < 6 or sv[-2] <= 1e-10 * sv[0]:
        raise DegenerateFit("more than one conic fits the points")
    A, B, C, D, E, F = vt[-1]
    norm_c = np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])
    to_norm = np.array([[1 / rms, 0, -mean[0] / rms], [0, 1 / rms, -mean[1] / rms], [0, 0, 1]])
    conic = normalize_conic(to_norm.T @ norm_c @ to_norm)
    if full_output:
        return conic, float(sv[-1] / math.sqrt(len(pts)))
    return conic


def apply_affine(m: AffineMap, x):
    """Image of a point, an (n, 2) point array, or a conic matrix."""
    lin = np.asarray(m.linear)
    if abs(np.linalg.det(lin)) < ROOT_TOL:
        raise SingularMap("affine map is singular")
    x = np.asarray(x, dtype=float)
    if x.shape == (3, 3):
        hinv = np.linalg.inv(m.homogeneous)
        out = hinv.T @ x @ hinv
        return 0.5 * (out + out.T)
    return x @ lin.T + np.asarray(m.translation)
