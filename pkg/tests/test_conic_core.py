import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stationary_poncelet import conic_core as cc
from stationary_poncelet.errors import (
    DegenerateFit, NotAnEllipse, PointAtInfinity, PointInside, PointOnConic, SingularConic,
    SingularMap,
)

UNIT = cc.circle_matrix((0.0, 0.0), 1.0)
E21 = cc.matrix_of(cc.AxisEllipse(2.0, 1.0))


def same_conic(c1, c2, tol=1e-10):
    return np.allclose(cc.normalize_conic(c1), cc.normalize_conic(c2), atol=tol)


# --- construction / classification

def test_matrix_of_unit_circle():
    assert same_conic(cc.matrix_of(cc.AxisEllipse(1, 1)), np.diag([1.0, 1.0, -1.0]))


def test_matrix_of_2_1_coefficients():
    assert same_conic(E21, np.diag([0.25, 1.0, -1.0]))


def test_matrix_of_shifted_contains_point():
    c = cc.matrix_of(cc.AxisEllipse(2, 1, (math.sqrt(3), 0)))
    assert abs(cc.conic_value(c, (math.sqrt(3), 1.0))) < 1e-12


def test_axis_ellipse_rejects_bad_axes():
    with pytest.raises(ValueError):
        cc.AxisEllipse(0.0, 1.0)


def test_classify_circle():
    e = cc.classify(np.diag([1.0, 1.0, -1.0]))
    assert e.center == (0.0, 0.0)
    assert e.semi_major == pytest.approx(1) and e.semi_minor == pytest.approx(1)


def test_classify_round_trip():
    e = cc.classify(cc.matrix_of(cc.AxisEllipse(2, 1, (1, 2))))
    assert np.allclose(e.center, (1, 2), atol=1e-12)
    assert (e.semi_major, e.semi_minor) == pytest.approx((2, 1), abs=1e-12)
    assert min(e.rotation, math.pi - e.rotation) < 1e-12


@pytest.mark.parametrize("c", [np.diag([1.0, -1.0, -1.0]), np.diag([1.0, 1.0, 1.0]),
                               np.diag([1.0, 0.0, -1.0])])
def test_classify_rejects_non_ellipses(c):
    with pytest.raises(NotAnEllipse):
        cc.classify(c)


def test_fit_rotated_ellipse_recovers_parameters():
    e = cc.GeneralEllipse((0.4, -0.7), 3.0, 1.0, math.pi / 6)
    f = cc.classify(cc.fit_conic(e.points(32)))
    assert np.allclose(f.center, e.center, atol=1e-8)
    assert (f.semi_major, f.semi_minor, f.rotation) == pytest.approx((3, 1, math.pi / 6), abs=1e-8)


def test_foci_axis_aligned():
    f1, f2 = sorted(cc.foci_of(cc.classify(E21)), key=lambda p: p[0])
    assert np.allclose(f1, (-math.sqrt(3), 0)) and np.allclose(f2, (math.sqrt(3), 0))


def test_foci_circle_coincide():
    f1, f2 = cc.foci_of(cc.classify(UNIT))
    assert np.allclose(f1, 0) and np.allclose(f2, 0)


def test_foci_rotated():
    f = cc.foci_of(cc.GeneralEllipse((0, 0), 0.8, 0.4, math.pi / 2))
    got = sorted(tuple(np.round(p, 12)) for p in f)
    assert np.allclose(got, [(0, -math.sqrt(0.48)), (0, math.sqrt(0.48))], atol=1e-12)


# --- tangents and intersections

def test_tangents_from_x_axis_point():
    lines = cc.tangents_from((2.0, 0.0), UNIT)
    touches = sorted((tuple(cc.pole(l, UNIT)) for l in lines), key=lambda p: p[1])
    assert np.allclose(touches, [(0.5, -math.sqrt(3) / 2), (0.5, math.sqrt(3) / 2)], atol=1e-12)
    for l in lines:
        assert abs(l @ cc.homog((2.0, 0.0))) < 1e-12


def test_tangents_from_y_axis_point():
    touches = sorted((tuple(cc.pole(l, UNIT)) for l in cc.tangents_from((0.0, 2.0), UNIT)))
    assert np.allclose(touches, [(-math.sqrt(3) / 2, 0.5), (math.sqrt(3) / 2, 0.5)], atol=1e-12)


def test_tangents_to_focal_x1_caustic():
    r1 = (math.sqrt(7) - 2) / 3
    caustic = cc.circle_matrix((math.sqrt(3), 0.0), r1)
    p = (2 * math.cos(0.3), math.sin(0.3))
    for line in cc.tangents_from(p, caustic):
        assert cc.tangency_residual(line, caustic) < 1e-12


def test_tangents_from_rejects_on_and_inside():
    with pytest.raises(PointOnConic):
        cc.tangents_from((1.0, 0.0), UNIT)
    with pytest.raises(PointInside):
        cc.tangents_from((0.2, 0.1), UNIT)


def test_intersect_x_axis():
    pts = sorted(map(tuple, cc.intersect_line_conic(np.array([0.0, 1.0, 0.0]), UNIT)))
    assert np.allclose(pts, [(-1, 0), (1, 0)])


def test_intersect_tangent_line_single_point():
    pts = cc.intersect_line_conic(np.array([1.0, 0.0, -1.0]), UNIT)
    assert len(pts) == 1 and np.allclose(pts[0], (1, 0))


def test_intersect_chord_recovers_endpoints():
    e = cc.AxisEllipse(2, 1)
    p, q = e.point(0.3), e.point(1.1)
    got = cc.intersect_line_conic(cc.join(p, q), E21)
    assert len(got) == 2
    got = sorted(map(tuple, got))
    want = sorted([tuple(p), tuple(q)])
    assert np.allclose(got, want, atol=1e-12)


def test_intersect_missing_line():
    assert cc.intersect_line_conic(np.array([1.0, 0.0, -3.0]), UNIT) == []


# --- pole / polar

def test_polar_of_outside_point():
    l = cc.polar_line((2.0, 0.0), UNIT)
    assert np.allclose(l / l[0], (1, 0, -0.5))


def test_polar_of_point_on_conic_is_tangent():
    p = cc.AxisEllipse(2, 1).point(0.77)
    assert cc.tangency_residual(cc.polar_line(p, E21), E21) < 1e-12


def test_pole_at_infinity_raises():
    with pytest.raises(PointAtInfinity):
        cc.pole(np.array([1.0, 0.0, 0.0]), UNIT)


def test_pole_singular_conic():
    with pytest.raises(SingularConic):
        cc.pole(np.array([1.0, 0.0, -1.0]), np.diag([1.0, 0.0, -1.0]))


def test_pole_polar_round_trip_random(rng):
    for _ in range(100):
        p = rng.uniform(-5, 5, 2)
        if abs(cc.conic_value(E21, p)) < 1e-3:
            continue
        assert np.allclose(cc.pole(cc.polar_line(p, E21), E21), p, atol=1e-10)


@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(0.1, 10))
def test_predicates_scale_invariant(x, y, k):
    p = (x, y)
    assert cc.is_inside(E21, p) == cc.is_inside(k * E21, p)
    if abs(cc.conic_value(E21, p)) > 1e-6:
        assert np.allclose(cc.pole(cc.polar_line(p, k * E21), k * E21), p, atol=1e-9)


# --- fitting

def test_fit_unit_circle():
    pts = cc.GeneralEllipse((0, 0), 1, 1).points(12)
    c, residual = cc.fit_conic(pts, full_output=True)
    assert same_conic(c, np.diag([1.0, 1.0, -1.0]))
    assert residual < 1e-12


def test_fit_ellipse_round_trip():
    pts = np.array([cc.AxisEllipse(2, 1).point(t) for t in np.linspace(0, 6, 12)])
    assert same_conic(cc.fit_conic(pts), E21)


def test_fit_rejects_collinear():
    pts = np.column_stack([np.linspace(0, 1, 12), np.linspace(0, 1, 12)])
    with pytest.raises(DegenerateFit):
        cc.fit_conic(pts)


def test_fit_needs_six_points():
    with pytest.raises(ValueError):
        cc.fit_conic(np.zeros((5, 2)))


# --- affine maps

def test_identity_affine_leaves_input():
    m = cc.AffineMap()
    assert np.allclose(cc.apply_affine(m, (0.3, 0.4)), (0.3, 0.4))
    assert same_conic(cc.apply_affine(m, E21), E21)


def test_affine_scaling_makes_circle():
    m = cc.AffineMap(((0.5, 0.0), (0.0, 1.0)))
    assert same_conic(cc.apply_affine(m, E21), UNIT)


def test_singular_map_rejected():
    with pytest.raises(SingularMap):
        cc.apply_affine(cc.AffineMap(((1.0, 2.0), (2.0, 4.0))), E21)


def _random_map(rng):
    while True:
        lin = rng.uniform(-2, 2, (2, 2))
        if abs(np.linalg.det(lin)) > 0.2:
            return cc.AffineMap(lin, rng.uniform(-1, 1, 2))


def test_affine_incidence(rng):
    e = cc.AxisEllipse(2, 1, (0.3, -0.2))
    c = cc.matrix_of(e)
    for _ in range(100):
        m = _random_map(rng)
        img = cc.normalize_conic(cc.apply_affine(m, c))
        p = cc.apply_affine(m, e.point(rng.uniform(0, 2 * math.pi)))
        assert abs(cc.conic_value(img, p)) < 1e-10


def test_affine_center_equivariance(rng):
    c = cc.matrix_of(cc.AxisEllipse(2, 1, (0.5, 0.1)))
    for _ in range(20):
        m = _random_map(rng)
        got = cc.classify(cc.apply_affine(m, c)).center
        assert np.allclose(got, cc.apply_affine(m, (0.5, 0.1)), atol=1e-9)


def test_affine_inverse(rng):
    m = _random_map(rng)
    p = rng.uniform(-1, 1, 2)
    assert np.allclose(cc.apply_affine(m.inverse(), cc.apply_affine(m, p)), p)


# --- degenerate conics

def test_split_line_pair():
    l1, l2 = np.array([1.0, 2.0, -1.0]), np.array([0.5, -1.0, 2.0])
    d = np.outer(l1, l2) + np.outer(l2, l1)
    got = cc.split_degenerate(d)
    for want in (l1, l2):
        assert any(np.linalg.norm(np.cross(want, g)) < 1e-9 * np.linalg.norm(g) for g in got)


def test_adjugate_matches_inverse(rng):
    m = rng.normal(size=(3, 3))
    m = m + m.T
    assert np.allclose(cc.adjugate(m), np.linalg.det(m) * np.linalg.inv(m))


def test_meet_parallel_lines():
    with pytest.raises(PointAtInfinity):
        cc.meet(np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, -1.0]))
