"""Command-line front end: ``verify``, ``locus`` and ``probe`` subcommands.

Exit codes: 0 when every (non-experimental) verdict passes, 1 on a
verification failure or a failed porism gate, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import families, invariants, loci, poncelet, probes, svg
from . import conic_core as cc
from .errors import GeometryError, NotAPorism

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
PROBE_KINDS = ("x4-stationary-scan", "polar-tan-half-sum")
DEFAULT_SEED_TRIANGLE = [[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]
CSV_FIELDS = ("id", "samples", "mean", "maxAbsDeviation", "predicted", "verdict", "tolerance",
              "offset", "experimental", "note")


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- config

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys override the defaults of these flags")
    common.add_argument("--family", choices=[k.value for k in families.FamilyKind])
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--oc-x", dest="oc_x", type=float)
    common.add_argument("--oc-y", dest="oc_y", type=float)
    common.add_argument("--R", dest="R", type=float)
    common.add_argument("--r", dest="r", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--triangle", help="Brocard seed as x1,y1,x2,y2,x3,y3")
    common.add_argument("--samples", type=int, default=64)
    common.add_argument("--tolerance", type=float, default=invariants.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--perturb", type=float, default=0.0,
                        help="scale the caustic by (1 + perturb) about its centre")
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--format", dest="formats", action="append",
                        choices=("json", "csv", "svg"),
                        help="output format; repeat for several (default json)")

    p = argparse.ArgumentParser(prog="stationary-poncelet",
                                description="Verify stationary centers and conserved "
                                            "quantities of special Poncelet families.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every prediction of a family")
    lp = sub.add_parser("locus", parents=[common], help="sample and fit the locus of one center")
    lp.add_argument("--center", required=True, help="center index (e.g. 3) or n-gon centroid C0/C1/C2")
    pp = sub.add_parser("probe", parents=[common], help="report-only conjecture probes")
    pp.add_argument("--kind", required=True, choices=PROBE_KINDS)
    pp.add_argument("--pair", help="conic-pair JSON file (polar-tan-half-sum)")
    pp.add_argument("--trials", type=int, default=1000)
    return p


def _apply_config_file(args, argv):
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in data.items():
        key = key.replace("-", "_")
        if key in ("format", "formats"):
            if args.formats is None:
                args.formats = [value] if isinstance(value, str) else list(value)
        elif key not in given:
            setattr(args, key, value)
    return args


def _validate(args):
    if args.samples < 8:
        raise ConfigError("--samples must be at least 8")
    if not args.tolerance > 0:
        raise ConfigError("--tolerance must be positive")
    args.formats = list(dict.fromkeys(args.formats or ["json"]))
    if args.out_dir is None and set(args.formats) - {"json"}:
        raise ConfigError("csv/svg output needs --out-dir")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ConfigError(f"family {args.family} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return [getattr(args, n) for n in names]


def _triangle(args):
    if args.triangle is None:
        return DEFAULT_SEED_TRIANGLE
    if isinstance(args.triangle, list):
        return args.triangle
    try:
        vals = [float(v) for v in str(args.triangle).split(",")]
    except ValueError:
        raise ConfigError("--triangle must be six comma-separated numbers") from None
    if len(vals) != 6:
        raise ConfigError("--triangle must be six comma-separated numbers")
    return [vals[0:2], vals[2:4], vals[4:6]]


def family_params(args) -> dict:
    kind = families.FamilyKind(args.family)
    K = families.FamilyKind
    if kind in (K.FOCAL_X1, K.ISO_X2, K.FOCAL_X4, K.ISO_X7, K.MACBEATH, K.DUAL):
        a, b = _need(args, "a", "b")
        return {"a": a, "b": b}
    if kind is K.CHAPPLE:
        R, r = _need(args, "R", "r")
        return {"R": R, "r": r}
    if kind is K.BROCARD:
        return {"seed": _triangle(args)}
    if kind is K.AFFINE_MACBEATH:
        a, b = _need(args, "a", "b")
        return {"a": a, "b": b, "oc": (args.oc_x or 0.0, args.oc_y or 0.0)}
    R, n = _need(args, "R", "n")
    return {"R": R, "center": (args.oc_x or 0.0, args.oc_y or 0.0), "n": n}


def build_family(args) -> families.FamilySpec:
    if args.family is None:
        raise ConfigError("--family is required")
    try:
        spec = families.build(args.family, **family_params(args))
        if args.perturb:
            spec = families.perturbed(spec, args.perturb)
    except GeometryError as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from None
    return spec


def config_dict(args) -> dict:
    keys = ("command", "family", "a", "b", "oc_x", "oc_y", "R", "r", "n", "triangle", "samples",
            "tolerance", "seed", "perturb", "formats", "center", "kind", "pair", "trials")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------- serialisation

def _num(x):
    """JSON-safe number; NaN/inf become null. Python floats round-trip exactly."""
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def _value(v):
    if v is None:
        return None
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_num(q) for q in v]
    return _num(v)


def ellipse_dict(e: cc.GeneralEllipse) -> dict:
    return {"center": [_num(c) for c in e.center], "semiMajor": _num(e.semi_major),
            "semiMinor": _num(e.semi_minor), "rotation": _num(e.rotation)}


def report_dict(r: invariants.InvariantReport) -> dict:
    return {"id": str(r.id), "samples": r.samples, "mean": _value(r.mean),
            "maxAbsDeviation": _num(r.max_abs_deviation), "predicted": _value(r.predicted),
            "verdict": r.verdict, "tolerance": _num(r.tolerance), "offset": _num(r.offset),
            "experimental": r.experimental, "note": r.note}


def locus_dict(res: loci.LocusResult) -> dict:
    out = {"centerId": f"X{res.center_id}" if isinstance(res.center_id, int) else res.center_id,
           "kind": res.kind, "degenerate": res.kind != "ellipse",
           "algebraicResidual": _num(res.algebraic_residual),
           "fitted": None if res.fitted is None else ellipse_dict(res.fitted),
           "foci": None if res.fitted is None else [[_num(c) for c in f] for f in res.foci],
           "points": [[_num(x), _num(y)] for x, y in res.points]}
    if res.kind == "point":
        out["point"] = [_num(c) for c in np.mean(res.points, axis=0)]
    return out


def family_dict(spec: families.FamilySpec) -> dict:
    o = spec.pair.outer
    return {"kind": spec.kind.value, "n": spec.n,
            "params": json.loads(json.dumps(spec.params, default=_value)),
            "outer": {"a": _num(o.a), "b": _num(o.b), "center": [_num(c) for c in o.center]},
            "caustic": ellipse_dict(spec.pair.caustic_shape),
            "causticMatrix": [[_num(v) for v in row] for row in spec.pair.caustic]}


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        row = report_dict(r)
        for k in ("mean", "predicted"):
            if isinstance(row[k], list):
                row[k] = " ".join(repr(v) for v in row[k])
        w.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})
    return buf.getvalue()


def _write(args, name: str, text: str):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")


def _emit_json(args, doc: dict, name: str):
    text = json.dumps(doc, indent=2, allow_nan=False, ensure_ascii=False) + "\n"
    if args.out_dir is None:
        sys.stdout.write(text)
    elif "json" in args.formats:
        _write(args, name, text)


def _certification(spec, passed: bool, worst: float) -> dict:
    return {"probes": 64, "maxDefect": _num(worst), "tolerance": _num(poncelet.CLOSURE_TOL * spec.scale),
            "passed": passed}


def _certify(spec):
    try:
        return True, poncelet.certify(spec.pair, spec.n, probes=64)
    except NotAPorism as exc:
        return False, exc.max_defect


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    spec = build_family(args)
    passed, worst = _certify(spec)
    doc = {"config": config_dict(args), "family": family_dict(spec),
           "porismCertification": _certification(spec, passed, worst), "reports": [], "loci": []}
    if not passed:
        _emit_json(args, doc, "report.json")
        print(f"porism gate failed: max closure defect {worst:.3e}", file=sys.stderr)
        return EXIT_FAIL
    samples = poncelet.sample_family(spec.pair, spec.n, args.samples)
    reports = invariants.verify(spec, args.samples, args.tolerance)
    doc["reports"] = [report_dict(r) for r in reports]
    needed = sorted({c.center for c in spec.locus_claims}
                    | {c.value[0] for c in spec.locus_claims if c.kind == "scale"}, key=str)
    doc["loci"] = [locus_dict(loci.locus(spec, k, samples=samples)) for k in needed]
    _emit_json(args, doc, "report.json")
    if "csv" in args.formats:
        _write(args, "report.csv", reports_csv(reports))
    if "svg" in args.formats:
        _write(args, "family.svg", svg.render(spec.pair, [s.vertices for s in samples]))
    ok = invariants.all_passed(reports)
    failed = [str(r.id) for r in reports if not r.passed and not r.experimental]
    print(f"{spec.kind.value}: {len(reports)} reports, "
          + ("all pass" if ok else "FAILED: " + ", ".join(failed)), file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _center_id(text):
    text = str(text).strip()
    if text.upper().startswith("X") and text[1:].isdigit():
        text = text[1:]
    return int(text) if text.isdigit() else text.upper()


def cmd_locus(args) -> int:
    spec = build_family(args)
    center = _center_id(args.center)
    passed, worst = _certify(spec)
    doc = {"config": config_dict(args), "family": family_dict(spec),
           "porismCertification": _certification(spec, passed, worst), "reports": [], "loci": []}
    if not passed:
        _emit_json(args, doc, "locus.json")
        return EXIT_FAIL
    samples = poncelet.sample_family(spec.pair, spec.n, args.samples)
    try:
        res = loci.locus(spec, center, samples=samples)
    except GeometryError as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from None
    entry = locus_dict(res)
    claims = [c for c in spec.locus_claims if c.center == center]
    found = {center: res}
    for c in claims:
        if c.kind == "scale" and c.value[0] not in found:
            found[c.value[0]] = loci.locus(spec, c.value[0], samples=samples)
    claim_rows, foci_markers, ok = [], [], True
    for c in claims:
        measured, claimed = loci.evaluate_claim(c, found, spec)
        good = abs(measured - claimed) <= c.tolerance
        ok &= good or c.experimental
        claim_rows.append({"kind": c.kind, "measured": _num(measured), "claimed": _num(claimed),
                           "tolerance": c.tolerance, "verdict": "pass" if good else "fail",
                           "experimental": c.experimental, "note": c.note})
        if c.kind == "focus":
            foci_markers.append(tuple(c.value))
        if c.kind == "scale":
            ref = found[c.value[0]]
            if res.fitted is not None and ref.fitted is not None:
                entry["axisRatio"] = {
                    "reference": f"X{c.value[0]}" if isinstance(c.value[0], int) else c.value[0],
                    "major": _num(res.fitted.semi_major / ref.fitted.semi_major),
                    "minor": _num(res.fitted.semi_minor / ref.fitted.semi_minor)}
    entry["claims"] = claim_rows
    doc["loci"] = [entry]
    _emit_json(args, doc, "locus.json")
    if "svg" in args.formats:
        _write(args, f"locus-{entry['centerId']}.svg",
               svg.render(spec.pair, [s.vertices for s in samples], locus=res, foci=foci_markers))
    if "csv" in args.formats:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        w.writerows([repr(float(x)), repr(float(y))] for x, y in res.points)
        _write(args, f"locus-{entry['centerId']}.csv", buf.getvalue())
    print(f"locus {entry['centerId']}: {res.kind}, residual {res.algebraic_residual:.3e}",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_probe(args) -> int:
    doc = {"config": config_dict(args), "probe": args.kind}
    if args.kind == "x4-stationary-scan":
        if args.trials < 1:
            raise ConfigError("--trials must be positive")
        doc["findings"] = probes.x4_stationary_scan(args.trials, args.seed)
    else:
        if args.pair:
            try:
                pair, n = probes.load_pair(args.pair)
            except (OSError, KeyError, ValueError) as exc:
                raise ConfigError(f"cannot load conic pair {args.pair}: {exc}") from None
            n = args.n or n or 3
        elif args.family:
            spec = build_family(args)
            pair, n = spec.pair, spec.n
            doc["family"] = family_dict(spec)
        else:
            raise ConfigError("polar-tan-half-sum needs --pair or --family")
        try:
            doc["findings"] = probes.polar_half_angle_probe(pair, n, args.samples)
        except NotAPorism as exc:
            doc["findings"] = {"error": "NotAPorism", "message": str(exc)}
            _emit_json(args, doc, "probe.json")
            print(f"NotAPorism: {exc}", file=sys.stderr)
            return EXIT_FAIL
    doc = json.loads(json.dumps(doc, default=_value))
    _emit_json(args, doc, "probe.json")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "locus": cmd_locus, "probe": cmd_probe}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        args = _apply_config_file(args, argv)
        _validate(args)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
