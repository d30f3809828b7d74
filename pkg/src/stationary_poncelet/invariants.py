"""Measure quantities over family samples and compare with closed forms."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import conic_core as cc
from . import loci as loci_mod
from . import poncelet
from . import tri_centers as tc
from .errors import UnsupportedForFamily, UnsupportedCenter

DEFAULT_TOL = 1e-8

SCALAR_NAMES = (
    "Inradius", "Circumradius", "SinHalfSum", "TanHalfSum", "Cos2Sum", "CosSum",
    "CosProd", "SumSqSides", "PolarCircleSq", "AdamsRadius",
    "DistSqX1X2", "DistSqX1X4", "DistSqX1X7",
)
# angle sums that make sense for any convex polygon
POLYGON_SCALARS = ("SinHalfSum", "TanHalfSum", "CosSum")


@dataclass(frozen=True)
class InvariantId:
    name: str
    arg: int | str | None = None

    def __post_init__(self):
        if self.name in SCALAR_NAMES:
            if self.arg is not None:
                raise ValueError(f"{self.name} takes no argument")
        elif self.name == "CenterDrift":
            if self.arg not in tc.CENTER_INDICES:
                raise UnsupportedCenter(f"unsupported center X{self.arg}")
        elif self.name == "CentroidDrift":
            if self.arg not in tc.CENTROIDS:
                raise ValueError(f"centroid must be one of {tc.CENTROIDS}")
        elif self.name not in ("Identity", "Locus"):
            raise ValueError(f"unknown invariant {self.name!r}")

    @property
    def is_point(self) -> bool:
        return self.name in ("CenterDrift", "CentroidDrift")

    def __str__(self):
        return self.name if self.arg is None else f"{self.name}({self.arg})"

    @classmethod
    def parse(cls, text: str) -> "InvariantId":
        m = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*([\w:.@,\-() ]+?)\s*\))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse invariant {text!r}")
        name, arg = m.groups()
        if arg is not None and arg.isdigit():
            arg = int(arg)
        return cls(name, arg)


def center_drift(k) -> InvariantId:
    return InvariantId("CentroidDrift" if k in tc.CENTROIDS else "CenterDrift", k)


@dataclass(frozen=True)
class InvariantReport:
    id: InvariantId
    samples: int
    mean: float | tuple
    max_abs_deviation: float
    predicted: float | tuple | None
    verdict: str
    tolerance: float
    offset: float = 0.0  # distance of the mean from the predicted value or line
    experimental: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def evaluate(vertices, iid: InvariantId):
    """Value of a quantity on one polygon (a float, or a point for drifts)."""
    vertices = np.asarray(vertices, dtype=float)
    if iid.name == "CentroidDrift":
        return tc.ngon_centroids(vertices)[iid.arg]
    if len(vertices) != 3:
        if iid.name not in POLYGON_SCALARS:
            raise UnsupportedForFamily(f"{iid} is defined for triangles only")
        th = tc.polygon_angles(vertices)
        return float({"SinHalfSum": np.sum(np.sin(th / 2)), "TanHalfSum": np.sum(np.tan(th / 2)),
                      "CosSum": np.sum(np.cos(th))}[iid.name])
    m = tc.metrics(vertices)
    if iid.name == "CenterDrift":
        return tc.center(vertices, iid.arg, m)
    simple = {
        "Inradius": lambda: m.r,
        "Circumradius": lambda: m.R,
        "SumSqSides": lambda: float(np.sum(m.sides ** 2)),
        "PolarCircleSq": lambda: tc.polar_circle_sq(m),
        "AdamsRadius": lambda: tc.adams_radius(m),
        "DistSqX1X2": lambda: tc.dist_sq_x1_x2(m),
        "DistSqX1X4": lambda: tc.dist_sq_x1_x4(m),
        "DistSqX1X7": lambda: tc.dist_sq_x1_x7(m),
    }
    if iid.name in simple:
        return float(simple[iid.name]())
    key = iid.name[0].lower() + iid.name[1:]
    return tc.angle_sums(m)[key]


def image_of(vertices, image, pair):
    if image is None:
        return vertices
    if image == "polar":
        return tc.polar_polygon(vertices, pair.outer_matrix)
    raise ValueError(f"unknown image {image!r}")


def _line_distance(point, line) -> float:
    u, v, w = line
    return abs(u * point[0] + v * point[1] + w) / math.hypot(u, v)


def summarize(iid: InvariantId, values, scale: float, tol: float, predicted=None, on_line=None,
              experimental=False, note="") -> InvariantReport:
    """Reduce per-sample values to a report.

    Scalars: deviation is measured from the sample mean, tolerance is
    ``tol * max(1, |reference|)``. Points: drift is the largest distance from
    the mean point, tolerance is ``tol * scale``.
    """
    if iid.is_point:
        pts = np.asarray(values, dtype=float)
        mean = pts.mean(axis=0)
        dev = float(np.max(np.linalg.norm(pts - mean, axis=1)))
        bound = tol * scale
        offset = 0.0
        if predicted is not None:
            offset = float(np.linalg.norm(mean - np.asarray(predicted)))
        if on_line is not None:
            offset = max(offset, _line_distance(mean, on_line))
        mean_out = (float(mean[0]), float(mean[1]))
        pred_out = None if predicted is None else (float(predicted[0]), float(predicted[1]))
    else:
        vals = np.asarray(values, dtype=float)
        mean = float(vals.mean())
        dev = float(np.max(np.abs(vals - mean)))
        bound = tol * max(1.0, abs(mean if predicted is None else predicted))
        offset = 0.0 if predicted is None else abs(mean - predicted)
        mean_out = mean
        pred_out = None if predicted is None else float(predicted)
    ok = dev <= bound and offset <= bound
    return InvariantReport(iid, len(values), mean_out, dev, pred_out, "pass" if ok else "fail",
                           bound, offset, experimental, note)


def _prediction_for(spec, iid, image=None):
    for p in getattr(spec, "predictions", ()):
        if p.target == iid and p.image == image:
            return p
    return None


def measure(spec, iid: InvariantId | str, count: int = 64, tol: float = DEFAULT_TOL,
            image=None, samples=None) -> InvariantReport:
    """Evaluate ``iid`` on ``count`` uniform family samples.

    The matching prediction of ``spec`` (if any) supplies the expected value.
    """
    if isinstance(iid, str):
        iid = InvariantId.parse(iid)
    if count < 8:
        raise ValueError("count must be at least 8")
    if iid.name == "CenterDrift" and spec.n != 3:
        raise UnsupportedForFamily(f"{iid} requested for an {spec.n}-gon family")
    if iid.name not in POLYGON_SCALARS and not iid.is_point and spec.n != 3:
        raise UnsupportedForFamily(f"{iid} requested for an {spec.n}-gon family")
    if samples is None:
        samples = poncelet.sample_family(spec.pair, spec.n, count)
    pred = _prediction_for(spec, iid, image)
    values = [evaluate(image_of(s.vertices, image, spec.pair), iid) for s in samples]
    if pred is None:
        return summarize(iid, values, spec.pair.scale, tol)
    return summarize(iid, values, spec.pair.scale, pred.tolerance or tol, pred.value,
                     pred.on_line, pred.experimental, pred.note)


def identity_residuals(tri) -> dict:
    """Relative residuals of the classical triangle identities on one triangle."""
    m = tc.metrics(tri)
    x = {k: tc.center(tri, k, m) for k in (1, 2, 3, 4, 8, 10, 20)}
    d = lambda p, q: float(np.linalg.norm(x[p] - x[q]))  # noqa: E731
    sumsq = float(np.sum(m.sides ** 2))
    cs = tc.angle_sums(m)
    L = max(m.sides)

    def rel(lhs, rhs, unit):
        return abs(lhs - rhs) / unit

    return {
        "area=r*s": rel(m.area, m.r * m.s, L * L),
        "l1*l2*l3=4R*area": rel(m.l1 * m.l2 * m.l3, 4 * m.R * m.area, L ** 3),
        "angles sum to pi": abs(float(np.sum(m.angles)) - math.pi),
        "|X1X8|=3|X1X2|": rel(d(1, 8), 3 * d(1, 2), L),
        "|X3X2|=|X3X4|/3": rel(d(3, 2), d(3, 4) / 3, L),
        "X10=mid(X1,X8)": float(np.linalg.norm(x[10] - 0.5 * (x[1] + x[8]))) / L,
        "X20=2X3-X4": float(np.linalg.norm(x[20] - (2 * x[3] - x[4]))) / L,
        "sum l^2=9R^2-|X3X4|^2": rel(sumsq, 9 * m.R ** 2 - d(3, 4) ** 2, L * L),
        "prod cos=sum l^2/(8R^2)-1": abs(cs["cosProd"] - (sumsq / (8 * m.R ** 2) - 1)),
        "sum cos2=-1-4 prod cos": abs(cs["cos2Sum"] - (-1 - 4 * cs["cosProd"])),
        "DistSqX1X2 formula": rel(tc.dist_sq_x1_x2(m), d(1, 2) ** 2, L * L),
        "DistSqX1X4 formula": rel(tc.dist_sq_x1_x4(m), d(1, 4) ** 2, L * L),
        "DistSqX1X7 formula": rel(tc.dist_sq_x1_x7(m),
                                  float(np.sum((tc.center(tri, 7, m) - x[1]) ** 2)), L * L),
    }


def identity_reports(samples, tol: float) -> list[InvariantReport]:
    rows = [identity_residuals(s.vertices) for s in samples]
    out = []
    for key in rows[0]:
        worst = max(r[key] for r in rows)
        mean = float(np.mean([r[key] for r in rows]))
        out.append(InvariantReport(InvariantId("Identity", key), len(rows), mean, worst, 0.0,
                                   "pass" if worst <= tol else "fail", tol))
    return out


def locus_reports(spec, samples) -> list[InvariantReport]:
    claims = getattr(spec, "locus_claims", ())
    needed = set()
    for c in claims:
        needed.add(c.center)
        if c.kind == "scale":
            needed.add(c.value[0])
    found = {k: loci_mod.locus(spec, k, samples=samples) for k in sorted(needed, key=str)}
    out = []
    for c in claims:
        measured, claimed = loci_mod.evaluate_claim(c, found, spec)
        gap = abs(measured - claimed)
        ok = gap <= c.tolerance
        iid = InvariantId("Locus", f"X{c.center}:{c.kind}" if isinstance(c.center, int)
                          else f"{c.center}:{c.kind}")
        out.append(InvariantReport(iid, len(samples), measured, gap, claimed,
                                   "pass" if ok else "fail", c.tolerance, gap, c.experimental,
                                   c.note))
    return out


def verify(spec, count: int = 64, tol: float = DEFAULT_TOL, with_loci: bool = True):
    """Porism gate, then every prediction, the identity suite and locus claims.

    Raises NotAPorism before any quantity is measured if closure fails.
    """
    poncelet.certify(spec.pair, spec.n, probes=64)
    samples = poncelet.sample_family(spec.pair, spec.n, count)
    reports = []
    for pred in spec.predictions:
        reports.append(measure(spec, pred.target, count, tol, pred.image, samples))
    if spec.n == 3:
        reports.extend(identity_reports(samples, max(tol, 1e-10)))
    if with_loci:
        reports.extend(locus_reports(spec, samples))
    return reports


def all_passed(reports, include_experimental: bool = False) -> bool:
    return all(r.passed for r in reports if include_experimental or not r.experimental)


def drift_line(p, q):
    """Homogeneous line through two points, for on-line predictions."""
    return tuple(float(v) for v in cc.join(p, q))
