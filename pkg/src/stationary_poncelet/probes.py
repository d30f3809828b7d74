"""Report-only probes of the open conjectures.

Neither probe asserts anything: they return findings dictionaries that the
command line front end serialises.
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import conic_core as cc
from . import families
from . import poncelet
from . import tri_centers as tc
from .errors import GeometryError

MATCH_TOL = 1e-6
STATIONARY_TOL = 1e-6


def _x4_drift(pair, count=16) -> float:
    # sample_family certifies closure before sampling
    pts = [tc.center(s.vertices, 4) for s in poncelet.sample_family(pair, 3, count)]
    pts = np.array(pts)
    return float(np.max(np.linalg.norm(pts - pts.mean(axis=0), axis=1)))


def _close(x, y, scale) -> bool:
    return abs(x - y) <= MATCH_TOL * scale


def known_x4_configuration(pair) -> str | None:
    """Name of the known stationary-X4 configuration the pair matches, if any.

    Comparison is done after translating the outer conic to the origin, so the
    test is invariant under translation and uniform scaling.
    """
    outer = pair.outer
    k = pair.caustic_shape
    ox, oy = outer.center
    kx, ky = k.center[0] - ox, k.center[1] - oy
    s = outer.scale
    a, b = outer.a, outer.b
    if math.isclose(a, b, rel_tol=MATCH_TOL):
        dist = min(float(np.linalg.norm(f - np.array([ox, oy]))) for f in cc.foci_of(k))
        if _close(dist, 0.0, s) and _close(k.semi_major, a / 2, s):
            return "macbeath"
        return None
    if a < b:
        a, b, kx, ky = b, a, ky, kx
    c = math.sqrt(a * a - b * b)
    circular = math.isclose(k.semi_major, k.semi_minor, rel_tol=MATCH_TOL)
    if circular and _close(abs(kx), a * a * c / (a * a + b * b), s) and _close(ky, 0.0, s) \
            and _close(k.semi_major, a * b * b / (a * a + b * b), s):
        return "focal-x4"
    if _close(kx, 0.0, s) and _close(ky, 0.0, s):
        ka, kb = k.semi_major, k.semi_minor
        want = sorted((a * b * b / (a * a + b * b), a * a * b / (a * a + b * b)))
        if _close(min(ka, kb), want[0], s) and _close(max(ka, kb), want[1], s):
            return "dual"
    return None


def _random_pair(rng, mode):
    if mode == "circle-in-ellipse":
        b = rng.uniform(0.3, 0.95)
        while True:
            xc, yc = rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9) * b
            try:
                r = families.caustic_radius_general(1.0, b, xc, yc)
                return poncelet.ConicPair(cc.AxisEllipse(1.0, b), cc.circle_matrix((xc, yc), r), (xc, yc))
            except GeometryError:
                continue
    if mode == "concentric":
        b = rng.uniform(0.3, 0.95)
        ac = rng.uniform(0.05, 0.95)
        return poncelet.ConicPair(cc.AxisEllipse(1.0, b),
                                  cc.matrix_of(cc.AxisEllipse(ac, b * (1 - ac))), (0.0, 0.0))
    if mode == "ellipse-in-circle":
        center = rng.uniform(-0.4, 0.4, 2)
        aspect = rng.uniform(0.5, 1.0)
        found = poncelet.search_caustic_ngon(cc.AxisEllipse(1.0, 1.0), center, 3, aspect=aspect)
        return found.pair
    b = rng.uniform(0.3, 0.95)
    if mode == "known-focal-x4":
        return families.focal_x4(1.0, b).pair
    if mode == "known-dual":
        return families.dual(1.0, b).pair
    return families.macbeath(0.5, 0.5 * b).pair


MODES = ("circle-in-ellipse", "concentric", "ellipse-in-circle",
         "known-focal-x4", "known-dual", "known-macbeath")
WEIGHTS = (0.6, 0.2, 0.05, 0.05, 0.05, 0.05)


def x4_stationary_scan(trials: int = 1000, seed: int = 0, count: int = 16) -> dict:
    """Randomised search for stationary-X4 triangle families outside the
    focal-X4, MacBeath and dual configurations."""
    rng = np.random.default_rng(seed)
    stats = {"trials": trials, "seed": seed, "certified": 0, "stationary": 0,
             "matched": {}, "skipped": 0, "counterexamples": []}
    for i in range(trials):
        mode = MODES[rng.choice(len(MODES), p=WEIGHTS)]
        try:
            pair = _random_pair(rng, mode)
            drift = _x4_drift(pair, count)
        except GeometryError:
            stats["skipped"] += 1
            continue
        stats["certified"] += 1
        if drift > STATIONARY_TOL * pair.scale:
            continue
        stats["stationary"] += 1
        name = known_x4_configuration(pair)
        if name is None:
            shape = pair.caustic_shape
            stats["counterexamples"].append({
                "trial": i, "mode": mode, "x4Drift": drift,
                "outer": [pair.outer.a, pair.outer.b, *pair.outer.center],
                "caustic": [*shape.center, shape.semi_major, shape.semi_minor, shape.rotation],
            })
        else:
            stats["matched"][name] = stats["matched"].get(name, 0) + 1
    return stats


def _conic_from_json(obj):
    if "coefficients" in obj:
        A, B, C, D, E, F = map(float, obj["coefficients"])
        return np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])
    return cc.matrix_of(cc.AxisEllipse(float(obj["a"]), float(obj["b"]),
                                       tuple(obj.get("center", (0.0, 0.0)))))


def load_pair(path) -> tuple[poncelet.ConicPair, int | None]:
    """Read a conic-pair file: outer and caustic as axis-ellipse parameters
    ({"a", "b", "center"}) or six coefficients of A x^2 + B xy + C y^2 + D x + E y + F."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    outer = data["outer"]
    if "coefficients" in outer:
        shape = cc.classify(_conic_from_json(outer))
        if shape.semi_major == shape.semi_minor or shape.rotation < 1e-12 \
                or math.pi - shape.rotation < 1e-12:
            outer_e = cc.AxisEllipse(shape.semi_major, shape.semi_minor, shape.center)
        elif abs(shape.rotation - math.pi / 2) < 1e-12:
            outer_e = cc.AxisEllipse(shape.semi_minor, shape.semi_major, shape.center)
        else:
            raise ValueError("outer conic must be axis-aligned")
    else:
        outer_e = cc.AxisEllipse(float(outer["a"]), float(outer["b"]),
                                 tuple(outer.get("center", (0.0, 0.0))))
    pair = poncelet.ConicPair(outer_e, _conic_from_json(data["caustic"]))
    return pair, data.get("n")


def polar_half_angle_probe(pair, n: int, count: int = 64) -> dict:
    """Deviation of the half-angle sums of the polar images (wrt the outer
    conic) over a certified n-gon porism."""
    poncelet.certify(pair, n)
    sums = {"sinHalfSum": [], "tanHalfSum": []}
    for s in poncelet.sample_family(pair, n, count):
        th = tc.polygon_angles(tc.polar_polygon(s.vertices, pair.outer_matrix))
        sums["sinHalfSum"].append(float(np.sum(np.sin(th / 2))))
        sums["tanHalfSum"].append(float(np.sum(np.tan(th / 2))))
    out = {"n": n, "samples": count}
    for key, vals in sums.items():
        vals = np.asarray(vals)
        out[key] = {"mean": float(vals.mean()), "maxAbsDeviation": float(np.max(np.abs(vals - vals.mean())))}
    return out

