"""Constructors for the special Poncelet configurations and their predictions.

Every constructor returns a :class:`FamilySpec`: the conic pair plus the
closed-form values the verification harness checks against.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import conic_core as cc
from . import poncelet
from . import tri_centers as tc
from .errors import (
    CircularOuter,
    EulerViolation,
    InvalidShape,
    NoValidCaustic,
    OutsideHalfEllipse,
)
from .invariants import InvariantId, center_drift, drift_line
from .loci import LocusClaim


class FamilyKind(enum.Enum):
    FOCAL_X1 = "focal-x1"
    ISO_X2 = "iso-x2"
    FOCAL_X4 = "focal-x4"
    ISO_X7 = "iso-x7"
    MACBEATH = "macbeath"
    DUAL = "dual"
    CHAPPLE = "chapple"
    BROCARD = "brocard"
    AFFINE_MACBEATH = "affine-macbeath"
    MACBEATH_NGON = "macbeath-ngon"


@dataclass(frozen=True)
class Prediction:
    target: InvariantId
    value: float | tuple | None = None
    on_line: tuple | None = None
    tolerance: float | None = None
    image: str | None = None  # "polar": measured on the polar image wrt the outer conic
    experimental: bool = False
    note: str = ""


@dataclass(frozen=True, eq=False)
class FamilySpec:
    kind: FamilyKind
    pair: poncelet.ConicPair
    predictions: tuple
    n: int = 3
    params: dict = field(default_factory=dict)
    locus_claims: tuple = ()

    @property
    def scale(self) -> float:
        return self.pair.scale


def scalar(name, value, **kw) -> Prediction:
    return Prediction(InvariantId(name), float(value), **kw)


def stationary(k, at=None, on_line=None, **kw) -> Prediction:
    at = None if at is None else (float(at[0]), float(at[1]))
    return Prediction(center_drift(k), at, on_line, **kw)


def _check_shape(a, b):
    if not (a > 0 and b > 0):
        raise InvalidShape(f"semi-axes must be positive (a={a}, b={b})")
    if a < b:
        raise InvalidShape(f"a > b required (a={a}, b={b})")
    if a == b:
        raise CircularOuter("outer conic is a circle (c = 0)")
    return math.sqrt(a * a - b * b)


def caustic_radius_general(a, b, xc, yc) -> float:
    """Radius of the circular triangle caustic centred at (xc, yc) in ellipse (a, b)."""
    c = _check_shape(a, b)
    rad1 = a ** 4 - c * c * xc * xc
    if rad1 < 0:
        raise NoValidCaustic(f"centre ({xc}, {yc}) admits no circular caustic")
    r = (b * math.sqrt(rad1) - a * math.sqrt(b ** 4 + c * c * yc * yc)) / (c * c)
    if r <= 0:
        raise NoValidCaustic(f"centre ({xc}, {yc}) gives non-positive radius {r}")
    return r


def _circle_pair(a, b, center, radius):
    return poncelet.ConicPair(cc.AxisEllipse(a, b), cc.circle_matrix(center, radius), tuple(center))


def focal_x1(a, b) -> FamilySpec:
    c = _check_shape(a, b)
    r1 = b * b / (c * c) * (math.sqrt(a * a + c * c) - a)
    pair = _circle_pair(a, b, (c, 0.0), r1)
    preds = (
        scalar("Inradius", r1),
        scalar("SinHalfSum", (c * c - a * a + a * math.sqrt(a * a + c * c)) / (c * c)),
        stationary(1, (c, 0.0)),
    )
    return FamilySpec(FamilyKind.FOCAL_X1, pair, preds, params={"a": a, "b": b})


def iso_x2(a, b) -> FamilySpec:
    c = _check_shape(a, b)
    y1 = c * b / (2 * a)
    pair = _circle_pair(a, b, (0.0, y1), b / 2)
    preds = (
        scalar("Inradius", b / 2),
        stationary(1, (0.0, y1)),
        stationary(2, (0.0, c * b / (3 * a))),
        stationary(8, (0.0, 0.0)),
        stationary(10, (0.0, c * b / (4 * a))),
        scalar("DistSqX1X2", (c * b / (6 * a)) ** 2),
    )
    return FamilySpec(FamilyKind.ISO_X2, pair, preds, params={"a": a, "b": b})


def focal_x4(a, b) -> FamilySpec:
    c = _check_shape(a, b)
    den = 2 * a * a - c * c
    r4 = a * (a * a - c * c) / den
    pair = _circle_pair(a, b, (a * a * c / den, 0.0), r4)
    rpol = -b ** 4 / (a * a + b * b)
    preds = (
        scalar("Inradius", r4),
        stationary(4, (c, 0.0)),
        scalar("PolarCircleSq", rpol),
        scalar("DistSqX1X4", 2 * r4 * r4 + rpol),
    )
    claims = (
        LocusClaim(3, "focus", (0.0, 0.0), note="outer centre is a focus of the X3 locus"),
        LocusClaim(20, "scale", (3, 2.0), note="X20 locus is twice the X3 locus"),
        LocusClaim(20, "focus", (-c, 0.0), note="distal outer focus is a focus of the X20 locus"),
    )
    return FamilySpec(FamilyKind.FOCAL_X4, pair, preds, params={"a": a, "b": b},
                      locus_claims=claims)


def iso_x7(a, b) -> FamilySpec:
    c = _check_shape(a, b)
    k7 = math.sqrt(4 * a ** 4 - 5 * a * a * b * b + b ** 4)
    r7 = b * b / (2 * a)
    try:
        pair = _circle_pair(a, b, (k7 / (2 * a), 0.0), r7)
    except poncelet.CausticNotInterior as exc:
        raise NoValidCaustic(str(exc)) from None
    q = 4 * a * a - b * b
    preds = (
        scalar("Inradius", r7),
        stationary(7, (2 * a * k7 / q, 0.0)),
        scalar("TanHalfSum", math.sqrt(q) / a),
        scalar("DistSqX1X7", b ** 4 * c * c / (4 * a * a * q)),
        scalar("AdamsRadius", b * b / (2 * a) * math.sqrt((5 * a * a - b * b) / q)),
    )
    return FamilySpec(FamilyKind.ISO_X7, pair, preds, params={"a": a, "b": b})


def macbeath(a, b) -> FamilySpec:
    """Circle of radius 2a about the left focus of the (a, b) inconic at the origin."""
    if not (a > 0 and b > 0) or a < b:
        raise InvalidShape(f"need a >= b > 0 (a={a}, b={b})")
    cp = math.sqrt(a * a - b * b)
    x3, x4 = (-cp, 0.0), (cp, 0.0)
    inconic = cc.matrix_of(cc.AxisEllipse(a, b))
    pair = poncelet.ConicPair(cc.AxisEllipse(2 * a, 2 * a, x3), inconic, (0.0, 0.0), (x3, x4))
    axis = (0.0, 1.0, 0.0)
    preds = (
        scalar("Circumradius", 2 * a),
        scalar("SumSqSides", 32 * a * a + 4 * b * b),
        scalar("Cos2Sum", (cp * cp - 3 * a * a) / (2 * a * a)),
        scalar("CosProd", b * b / (8 * a * a)),
        scalar("PolarCircleSq", -2 * b * b),
        stationary(3, x3),
        stationary(4, x4),
        stationary(5, (0.0, 0.0)),
        stationary(2, (-cp / 3, 0.0), axis),
    )
    return FamilySpec(FamilyKind.MACBEATH, pair, preds, params={"a": a, "b": b})


def dual(a, b) -> FamilySpec:
    c = _check_shape(a, b)
    k = a * b / (a * a + b * b)
    # 90-degree rotated homothet of the outer: satisfies a_c/a + b_c/b = 1
    caustic = cc.matrix_of(cc.AxisEllipse(k * b, k * a))
    pair = poncelet.ConicPair(cc.AxisEllipse(a, b), caustic, (0.0, 0.0))
    preds = (
        stationary(4, (0.0, 0.0)),
        scalar("PolarCircleSq", -a * a * b * b / (a * a + b * b)),
    )
    claims = (LocusClaim(3, "homothety", c * c / (2 * (a * a + b * b)),
                         note="X3 locus homothetic to the outer ellipse"),)
    return FamilySpec(FamilyKind.DUAL, pair, preds, params={"a": a, "b": b}, locus_claims=claims)


def chapple(R, r) -> FamilySpec:
    """Bicentric triangles: circumcircle R at the origin, incircle r at (d, 0)."""
    if not r > 0 or R < 2 * r:
        raise EulerViolation(f"need R >= 2r > 0 (R={R}, r={r})")
    d = math.sqrt(R * (R - 2 * r))
    pair = poncelet.ConicPair(cc.AxisEllipse(R, R), cc.circle_matrix((d, 0.0), r), (d, 0.0))
    carnot = 1 + r / R
    preds = (
        scalar("Circumradius", R),
        scalar("Inradius", r),
        scalar("CosSum", carnot),
        stationary(1, (d, 0.0)),
        stationary(3, (0.0, 0.0)),
        stationary(354),
        scalar("SinHalfSum", carnot, image="polar"),
        stationary(1, (0.0, 0.0), image="polar"),
    )
    return FamilySpec(FamilyKind.CHAPPLE, pair, preds, params={"R": R, "r": r})


def brocard_points(tri):
    tri = tc.as_triangle(tri)
    l1, l2, l3 = tc.side_lengths(tri) ** 2
    first = tc.barycentric_point(tri, [l3 * l1, l1 * l2, l2 * l3])
    return first, tc.isogonal_conjugate(tri, first)


def inconic_from_foci(tri, f1, f2) -> cc.GeneralEllipse:
    """Ellipse with foci f1, f2 tangent to sideline AB of the triangle.

    For a tangent line the product of the focal distances equals the squared
    semi-minor axis.
    """
    a, b, _ = tc.as_triangle(tri)
    line = cc.join(a, b)
    dist = lambda p: abs(line[0] * p[0] + line[1] * p[1] + line[2]) / math.hypot(line[0], line[1])  # noqa: E731
    minor_sq = dist(f1) * dist(f2)
    half_focal = 0.5 * float(np.linalg.norm(np.subtract(f2, f1)))
    off = np.subtract(f2, f1)
    rot = math.atan2(off[1], off[0]) if half_focal > 0 else 0.0
    return cc.GeneralEllipse(0.5 * (np.asarray(f1) + f2), math.sqrt(minor_sq + half_focal ** 2),
                             math.sqrt(minor_sq), rot)


def brocard(seed) -> FamilySpec:
    seed = tc.as_triangle(seed)
    m = tc.metrics(seed)
    o = tc.center(seed, 3, m)
    w1, w2 = brocard_points(seed)
    inellipse = cc.matrix_of(inconic_from_foci(seed, w1, w2))
    for p, q in zip(seed, np.roll(seed, -1, axis=0)):
        if cc.tangency_residual(cc.join(p, q), inellipse) > cc.GEOM_TOL:
            raise InvalidShape("Brocard inellipse is not tangent to every sideline")
    pair = poncelet.ConicPair(cc.AxisEllipse(m.R, m.R, o), inellipse, None, (tuple(w1), tuple(w2)))
    x6 = tc.center(seed, 6, m)
    cot_sum = float(np.sum(1 / np.tan(m.angles)))
    preds = (
        scalar("Circumradius", m.R),
        stationary(6, x6),
        stationary(7, x6, image="polar"),
        scalar("TanHalfSum", cot_sum, image="polar"),
    )
    return FamilySpec(FamilyKind.BROCARD, pair, preds,
                      params={"seed": [list(map(float, v)) for v in seed]})


def affine_macbeath(a, b, oc) -> FamilySpec:
    """Affine image of a MacBeath family with its inconic centred at ``oc``."""
    if not (a > 0 and b > 0):
        raise InvalidShape(f"semi-axes must be positive (a={a}, b={b})")
    oc = np.asarray(oc, dtype=float)
    if (oc[0] / (a / 2)) ** 2 + (oc[1] / (b / 2)) ** 2 >= 1:
        raise OutsideHalfEllipse(f"{tuple(oc)} is not inside the half-size ellipse")
    to_circle = cc.AffineMap(((b / a, 0.0), (0.0, 1.0)))
    oc_img = cc.apply_affine(to_circle, oc)
    f = float(np.linalg.norm(oc_img))
    rot = math.atan2(oc_img[1], oc_img[0]) if f > 0 else 0.0
    # foci at the circle centre and at its reflection about oc_img; semi-major = R/2
    inconic_img = cc.GeneralEllipse(oc_img, b / 2, math.sqrt(b * b / 4 - f * f), rot)
    caustic = cc.apply_affine(to_circle.inverse(), cc.matrix_of(inconic_img))
    pair = poncelet.ConicPair(cc.AxisEllipse(a, b), caustic, tuple(oc))
    line = drift_line((0.0, 0.0), oc) if np.any(oc) else None
    preds = (stationary(2, 2 * oc / 3, line),)
    return FamilySpec(FamilyKind.AFFINE_MACBEATH, pair, preds,
                      params={"a": a, "b": b, "oc": [float(oc[0]), float(oc[1])]})


def macbeath_ngon(radius, center, n, tol=1e-6) -> FamilySpec:
    """Circle-inscribed n-gons about a caustic with one focus at the circle centre."""
    center = np.asarray(center, dtype=float)
    if not float(np.linalg.norm(center)) < radius:
        raise InvalidShape("caustic centre must be inside the circle")
    if n < 4:
        raise InvalidShape("n must be at least 4")
    found = poncelet.search_caustic_ngon(cc.AxisEllipse(radius, radius), center, n,
                                         focus=(0.0, 0.0))
    pair = found.pair
    if np.any(center):
        axis = drift_line((0.0, 0.0), center)
        c0 = stationary("C0", center if n == 4 else None, axis, tolerance=tol)
        c2 = stationary("C2", None, axis, tolerance=tol)
    else:
        c0 = stationary("C0", (0.0, 0.0), tolerance=tol)
        c2 = stationary("C2", (0.0, 0.0), tolerance=tol)
    claims = (
        LocusClaim("C1", "ellipse", None, 1e-6, True, "perimeter centroid sweeps a conic"),
        LocusClaim("C1", "caustic-major-axis", None, 1e-5, True,
                   "C1 locus major axis equals the caustic's"),
    )
    return FamilySpec(FamilyKind.MACBEATH_NGON, pair, (c0, c2), n,
                      {"R": radius, "center": [float(center[0]), float(center[1])], "n": n,
                       "caustic_semi_major": found.parameter}, claims if np.any(center) else ())


def perturbed(spec: FamilySpec, amount: float) -> FamilySpec:
    """Same family with the caustic scaled by (1 + amount) about its centre."""
    k = np.asarray(spec.pair.caustic_center, dtype=float)
    grow = cc.AffineMap(((1 + amount, 0.0), (0.0, 1 + amount)), k * -amount)
    caustic = cc.apply_affine(grow, spec.pair.caustic)
    pair = poncelet.ConicPair(spec.pair.outer, caustic, spec.pair.caustic_center)
    return FamilySpec(spec.kind, pair, spec.predictions, spec.n,
                      dict(spec.params, perturb=amount), spec.locus_claims)


def build(kind: str | FamilyKind, **params) -> FamilySpec:
    """Construct a family by kind name (as used on the command line)."""
    kind = FamilyKind(kind) if isinstance(kind, str) else kind
    a, b = params.get("a"), params.get("b")
    if kind is FamilyKind.FOCAL_X1:
        return focal_x1(a, b)
    if kind is FamilyKind.ISO_X2:
        return iso_x2(a, b)
    if kind is FamilyKind.FOCAL_X4:
        return focal_x4(a, b)
    if kind is FamilyKind.ISO_X7:
        return iso_x7(a, b)
    if kind is FamilyKind.MACBEATH:
        return macbeath(a, b)
    if kind is FamilyKind.DUAL:
        return dual(a, b)
    if kind is FamilyKind.CHAPPLE:
        return chapple(params["R"], params["r"])
    if kind is FamilyKind.BROCARD:
        return brocard(params["seed"])
    if kind is FamilyKind.AFFINE_MACBEATH:
        return affine_macbeath(a, b, params["oc"])
    return macbeath_ngon(params["R"], params["center"], params["n"])
