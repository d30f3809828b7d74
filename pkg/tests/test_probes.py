import json

import pytest

from stationary_poncelet import conic_core as cc
from stationary_poncelet import families, poncelet, probes
from stationary_poncelet.errors import NotAPorism


@pytest.mark.parametrize("spec, name", [
    (families.focal_x4(2, 1), "focal-x4"),
    (families.macbeath(1, 0.5), "macbeath"),
    (families.dual(2, 1), "dual"),
    (families.focal_x1(2, 1), None),
    (families.iso_x7(2, 1), None),
])
def test_known_configuration(spec, name):
    assert probes.known_x4_configuration(spec.pair) == name


def test_known_configuration_translated_and_scaled():
    spec = families.focal_x4(6, 3)
    pair = poncelet.ConicPair(cc.AxisEllipse(6, 3, (1.0, -2.0)),
                              cc.circle_matrix((spec.pair.caustic_center[0] + 1.0, -2.0), 1.2))
    assert probes.known_x4_configuration(pair) == "focal-x4"


def test_x4_scan_is_seeded():
    a = probes.x4_stationary_scan(40, seed=7)
    b = probes.x4_stationary_scan(40, seed=7)
    assert a == b
    assert a["certified"] + a["skipped"] == 40
    assert a["counterexamples"] == []


def test_polar_probe_requires_porism():
    pair = poncelet.ConicPair(cc.AxisEllipse(2, 1), cc.circle_matrix((0, 0), 0.3))
    with pytest.raises(NotAPorism):
        probes.polar_half_angle_probe(pair, 3)


def test_polar_probe_brocard_tan_half():
    spec = families.brocard([[0, 0], [4, 0], [1.5, 3]])
    out = probes.polar_half_angle_probe(spec.pair, 3)
    assert out["tanHalfSum"]["maxAbsDeviation"] < 1e-9


def test_load_pair_axis_form(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"outer": {"a": 2, "b": 2}, "caustic": {"a": 1, "b": 1}, "n": 3}))
    pair, n = probes.load_pair(path)
    assert n == 3 and poncelet.certify(pair, 3) < 1e-9


def test_load_pair_rejects_rotated_outer(tmp_path):
    rot = cc.matrix_of(cc.GeneralEllipse((0, 0), 2, 1, 0.4))
    coeffs = [rot[0, 0], 2 * rot[0, 1], rot[1, 1], 2 * rot[0, 2], 2 * rot[1, 2], rot[2, 2]]
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"outer": {"coefficients": [float(v) for v in coeffs]},
                                "caustic": {"a": 0.3, "b": 0.3}}))
    with pytest.raises(ValueError):
        probes.load_pair(path)
