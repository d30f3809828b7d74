import math
import types

import numpy as np
import pytest

from stationary_poncelet import conic_core as cc
from stationary_poncelet import families, invariants, poncelet
from stationary_poncelet.errors import NotAPorism, UnsupportedCenter, UnsupportedForFamily
from stationary_poncelet.invariants import InvariantId


def generic_spec():
    """A certified porism with nothing special about it (concentric circle caustic)."""
    pair = poncelet.ConicPair(cc.AxisEllipse(2, 1), cc.circle_matrix((0, 0), 2 / 3))
    return types.SimpleNamespace(pair=pair, n=3, predictions=(), locus_claims=())


def test_parse_ids():
    assert InvariantId.parse("CenterDrift(2)") == InvariantId("CenterDrift", 2)
    assert InvariantId.parse("CentroidDrift(C1)") == InvariantId("CentroidDrift", "C1")
    assert InvariantId.parse("SinHalfSum") == InvariantId("SinHalfSum")
    assert str(InvariantId("CenterDrift", 354)) == "CenterDrift(354)"


@pytest.mark.parametrize("text, err", [("Bogus", ValueError), ("CenterDrift(9)", UnsupportedCenter),
                                       ("Inradius(3)", ValueError), ("CentroidDrift(C7)", ValueError)])
def test_bad_ids(text, err):
    with pytest.raises(err):
        InvariantId.parse(text)


def test_measure_focal_x1_sin_half_sum():
    rep = invariants.measure(families.focal_x1(2, 1), "SinHalfSum", 64)
    assert rep.passed
    assert rep.mean == pytest.approx(1.4305009, abs=1e-7)
    assert rep.max_abs_deviation < 1e-9
    assert rep.samples == 64


def test_measure_iso_x2_centroid():
    rep = invariants.measure(families.iso_x2(2, 1), "CenterDrift(2)", 64)
    assert rep.passed and rep.max_abs_deviation < 1e-8
    assert rep.mean == pytest.approx((0, 0.2886751), abs=1e-7)


def test_negative_control_generic_pair():
    rep = invariants.measure(generic_spec(), "SinHalfSum", 64)
    assert rep.max_abs_deviation > 1e-4
    assert rep.verdict == "fail"


def test_wrong_prediction_fails_on_offset():
    spec = families.focal_x1(2, 1)
    bad = families.FamilySpec(spec.kind, spec.pair, (families.scalar("Inradius", 0.3),))
    rep = invariants.measure(bad, "Inradius")
    assert rep.max_abs_deviation < 1e-9 and rep.offset > 0.08 and not rep.passed


def test_verify_iso_x7_all_pass():
    reps = invariants.verify(families.iso_x7(2, 1), 64, 1e-8)
    assert reps and all(r.passed for r in reps)


def test_verify_macbeath_includes_sum_sq_sides():
    reps = {str(r.id): r for r in invariants.verify(families.macbeath(1, 0.5), 64, 1e-8)}
    assert all(r.passed for r in reps.values())
    assert reps["SumSqSides"].mean == pytest.approx(33, abs=1e-9)


def test_verify_chapple_conserves_cos_sum():
    reps = {str(r.id): r for r in invariants.verify(families.chapple(2, 0.9))}
    assert reps["CosSum"].passed and reps["CosSum"].mean == pytest.approx(1.45)


def test_verify_focal_x4_locus_claims():
    reps = [r for r in invariants.verify(families.focal_x4(2, 1)) if r.id.name == "Locus"]
    assert len(reps) == 3 and all(r.passed for r in reps)


def test_gate_runs_before_measurements(monkeypatch):
    spec = families.perturbed(families.dual(2, 1), 1e-3)
    called = []
    monkeypatch.setattr(invariants, "measure", lambda *a, **k: called.append(1))
    with pytest.raises(NotAPorism):
        invariants.verify(spec)
    assert not called


def test_center_drift_rejected_for_ngons():
    spec = families.macbeath_ngon(1, (0.2, 0), 4)
    with pytest.raises(UnsupportedForFamily):
        invariants.measure(spec, "CenterDrift(2)")
    with pytest.raises(UnsupportedForFamily):
        invariants.measure(spec, "Inradius")
    assert invariants.measure(spec, "SinHalfSum").samples == 64


def test_count_minimum():
    with pytest.raises(ValueError):
        invariants.measure(families.focal_x1(2, 1), "Inradius", 4)


def test_determinism():
    a = invariants.verify(families.iso_x7(2, 1), 32)
    b = invariants.verify(families.iso_x7(2, 1), 32)
    assert a == b


def test_point_tolerance_scales_with_configuration():
    small = invariants.measure(families.iso_x2(2, 1), "CenterDrift(2)")
    big = invariants.measure(families.iso_x2(20, 10), "CenterDrift(2)")
    assert big.tolerance == pytest.approx(10 * small.tolerance)
    assert big.passed


def test_spread_monotone_on_doubling_grids():
    # grids of 2^k uniform starts are nested, so the sample range can only grow
    spec = generic_spec()
    ranges = []
    for count in (8, 16, 32, 64, 128):
        vals = [invariants.evaluate(s.vertices, InvariantId("SinHalfSum"))
                for s in poncelet.sample_family(spec.pair, 3, count)]
        ranges.append(max(vals) - min(vals))
    assert all(b >= a for a, b in zip(ranges, ranges[1:]))


def test_conserved_deviation_stays_at_roundoff():
    spec = families.focal_x1(2, 1)
    for count in (8, 16, 32, 64, 128):
        assert invariants.measure(spec, "SinHalfSum", count).max_abs_deviation < 1e-12


def test_identity_reports_shape():
    samples = poncelet.sample_family(families.focal_x1(2, 1).pair, 3, 16)
    reps = invariants.identity_reports(samples, 1e-10)
    assert len(reps) == 13 and all(r.passed for r in reps)


def test_all_passed_ignores_experimental():
    ok = invariants.summarize(InvariantId("Inradius"), [1.0, 1.0], 1.0, 1e-8)
    bad = invariants.InvariantReport(InvariantId("Inradius"), 2, 1.0, 1.0, None, "fail", 1e-8,
                                     experimental=True)
    assert invariants.all_passed([ok, bad])
    assert not invariants.all_passed([ok, bad], include_experimental=True)


def test_on_line_prediction():
    line = invariants.drift_line((0, 0), (1, 0))
    rep = invariants.summarize(InvariantId("CenterDrift", 2), [(0.5, 0.1)] * 8, 1.0, 1e-8,
                               on_line=line)
    assert rep.offset == pytest.approx(0.1) and not rep.passed
