"""Trajectories of centers over a family: sampling, conic fitting, claims."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import conic_core as cc
from . import poncelet
from .errors import DegenerateFit, NotAnEllipse, NotHomothetic
from .tri_centers import point_of

POINT_LOCUS = 1e-7
HOMOTHETY_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class LocusResult:
    center_id: int | str
    points: np.ndarray
    fitted: cc.GeneralEllipse | None
    algebraic_residual: float
    kind: str = "ellipse"  # "ellipse", "point" or "non-ellipse"
    conic: np.ndarray | None = field(default=None, repr=False)

    @property
    def foci(self):
        return None if self.fitted is None else cc.foci_of(self.fitted)


@dataclass(frozen=True)
class LocusClaim:
    """A statement about the locus of one center.

    kinds: ``focus`` (value: point that must be a focus), ``scale`` (value:
    (other center, semi-axis ratio)), ``homothety`` (value: factor relative to
    the outer ellipse), ``caustic-major-axis`` (major axis equals the
    caustic's), ``ellipse`` (fit residual below tolerance).
    """

    center: int | str
    kind: str
    value: object = None
    tolerance: float = 1e-6
    experimental: bool = False
    note: str = ""


def locus_from_points(center_id, points, scale: float) -> LocusResult:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 12:
        raise ValueError("a locus needs at least 12 points")
    extent = np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))
    if extent < POINT_LOCUS * scale:
        return LocusResult(center_id, pts, None, 0.0, "point")
    try:
        conic, residual = cc.fit_conic(pts, full_output=True)
        fitted = cc.classify(conic)
    except (DegenerateFit, NotAnEllipse):
        return LocusResult(center_id, pts, None, float("nan"), "non-ellipse")
    return LocusResult(center_id, pts, fitted, residual, "ellipse", conic)


def locus(spec, center_id, count: int = 64, samples=None) -> LocusResult:
    """Sample ``center_id`` over the family of ``spec`` and fit its locus."""
    if count < 12:
        raise ValueError("count must be at least 12")
    if samples is None:
        samples = poncelet.sample_family(spec.pair, spec.n, count)
    pts = [point_of(s.vertices, center_id) for s in samples]
    return locus_from_points(center_id, pts, spec.pair.scale)


def _as_general(e) -> cc.GeneralEllipse:
    if isinstance(e, cc.AxisEllipse):
        return cc.classify(cc.matrix_of(e))
    return e


def _axis_angle_gap(e1: cc.GeneralEllipse, e2: cc.GeneralEllipse) -> float:
    gap = abs(e1.rotation - e2.rotation) % math.pi
    return min(gap, math.pi - gap)


def homothety_check(l: LocusResult, reference) -> dict:
    """Factor and mismatch of the fitted locus against a reference ellipse."""
    if l.fitted is None:
        raise NotHomothetic(f"locus of {l.center_id} is {l.kind}")
    ref = _as_general(reference)
    ratios = (l.fitted.semi_major / ref.semi_major, l.fitted.semi_minor / ref.semi_minor)
    residual = abs(ratios[0] - ratios[1])
    if not math.isclose(ref.semi_major, ref.semi_minor, rel_tol=1e-9):
        residual += _axis_angle_gap(l.fitted, ref)
    if residual > HOMOTHETY_TOL:
        raise NotHomothetic(f"semi-axis ratios {ratios} differ (residual {residual:.2e})")
    return {"factor": 0.5 * (ratios[0] + ratios[1]), "residual": residual}


def major_axis_check(l: LocusResult, reference) -> dict:
    """Compare the fitted major axis (length and direction) with a reference's."""
    if l.fitted is None:
        raise NotAnEllipse(f"locus of {l.center_id} is {l.kind}")
    ref = _as_general(reference)
    return {
        "length_error": abs(l.fitted.semi_major - ref.semi_major),
        "direction_error": _axis_angle_gap(l.fitted, ref),
        "center_offset": float(np.linalg.norm(np.subtract(l.fitted.center, ref.center))),
    }


def focus_distance(l: LocusResult, point) -> float:
    """Distance from a claimed point to the nearer fitted focus."""
    if l.fitted is None:
        return float("inf")
    return min(float(np.linalg.norm(f - np.asarray(point))) for f in cc.foci_of(l.fitted))


def evaluate_claim(claim: LocusClaim, loci: dict, spec) -> tuple[float, float]:
    """(measured, claimed) numbers for a claim; ``loci`` maps center -> result."""
    res = loci[claim.center]
    if claim.kind == "focus":
        return focus_distance(res, claim.value), 0.0
    if claim.kind == "scale":
        other, ratio = claim.value
        ref = loci[other]
        if res.fitted is None or ref.fitted is None:
            return float("nan"), ratio
        ratios = (res.fitted.semi_major / ref.fitted.semi_major,
                  res.fitted.semi_minor / ref.fitted.semi_minor)
        worst = max(ratios, key=lambda q: abs(q - ratio))
        return worst, ratio
    if claim.kind == "homothety":
        try:
            return homothety_check(res, spec.pair.outer)["factor"], claim.value
        except NotHomothetic:
            return float("nan"), claim.value
    if claim.kind == "caustic-major-axis":
        try:
            check = major_axis_check(res, spec.pair.caustic_shape)
        except NotAnEllipse:
            return float("nan"), 0.0
        return check["length_error"] + check["direction_error"], 0.0
    if claim.kind == "ellipse":
        return (res.algebraic_residual if res.kind == "ellipse" else float("nan")), 0.0
    raise ValueError(f"unknown locus claim kind {claim.kind!r}")
