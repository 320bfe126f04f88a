"""Command-line interface: polygon JSON I/O, decompositions, checks, bound tables, SVG."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from .cutlocus import build_cut_locus
from .decompose import (
    BOUND_SLACK,
    ORACLE_MAX_N,
    OracleSizeError,
    o_n_lower,
    o_n_upper,
    oracle_minmax,
    short_decomposition,
)
from .kernel import GeometryError
from .moduli import (
    ReconstructionError,
    marked_lengths,
    reconstruct,
    sample,
    spectrum,
)
from .polygon import (
    DecompositionError,
    IdealPolygon,
    basmajian_sum,
    catalan,
    inradius_formula,
    make_polygon,
    max_inradius,
    orthogeodesic,
    random_interior_point,
    random_triangulation,
    regular,
)
from .render import LAYERS, render_svg

POLYGON_FORMAT = "ideal-polygon/v1"
REPORT_FORMAT = "orthogeo-report/v1"
CHECKS = ("basmajian", "inradius", "bounds", "quadid", "roundtrip")

TOL_BASMAJIAN = 1e-10
TOL_QUAD = 1e-10
TOL_SPECTRUM = 1e-8
TOL_RESIDUAL = 1e-10


class UsageError(Exception):
    """Bad arguments or input; exit status 2."""


# ---------------------------------------------------------------- documents


def polygon_document(P: IdealPolygon) -> dict:
    return {"format": POLYGON_FORMAT, "n": P.n, "angles": list(P.angles)}


def dumps(doc: dict) -> str:
    # json writes floats with repr, the shortest string that reads back to the same double
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def parse_polygon_document(doc) -> IdealPolygon:
    if not isinstance(doc, dict):
        raise UsageError("polygon document must be a JSON object")
    if doc.get("format") != POLYGON_FORMAT:
        raise UsageError(f"expected format {POLYGON_FORMAT!r}, got {doc.get('format')!r}")
    angles = doc.get("angles")
    if not isinstance(angles, list) or not all(
        isinstance(a, (int, float)) and not isinstance(a, bool) for a in angles
    ):
        raise UsageError("angles must be a list of numbers")
    n = doc.get("n")
    if n != len(angles):
        raise UsageError(f"n = {n!r} does not match {len(angles)} angles")
    try:
        return make_polygon(angles)
    except GeometryError as exc:
        raise UsageError(str(exc)) from exc


def read_polygon(path: str) -> IdealPolygon:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    return parse_polygon_document(doc)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _identity(P: IdealPolygon) -> dict:
    digest = hashlib.sha256(json.dumps(list(P.angles)).encode()).hexdigest()
    return {"n": P.n, "angles": list(P.angles), "sha256": digest}


def _bounds_entry(n: int) -> dict:
    return {
        "lower": o_n_lower(n),
        "upper": o_n_upper(n),
        "lower_sinh_form": o_n_lower(n, "sinh"),
        "lower_three_halves": o_n_lower(n, "three_halves"),
    }


def _member_entry(m) -> dict:
    s = m.segment
    return {
        "sides": [m.i, m.j],
        "split": list(m.split),
        "length": m.length,
        "feet": [[s.foot1.x, s.foot1.y], [s.foot2.x, s.foot2.y]],
    }


# ---------------------------------------------------------------- commands


def cmd_regular(n: int, out: str | None = None) -> dict:
    if n < 3:
        raise UsageError("n must be ≥ 3")
    doc = polygon_document(regular(n))
    _write(out, dumps(doc))
    return doc


def cmd_decompose(path: str, method: str = "cutlocus", report: str | None = None) -> dict:
    P = read_polygon(path)
    n = P.n
    if n < 4:
        raise UsageError(f"n = {n}: a decomposition needs n ≥ 4 (a triangle has no orthogeodesics)")
    doc = {"format": REPORT_FORMAT, "input": _identity(P), "method": method}
    if method == "cutlocus":
        dec = short_decomposition(P)
    elif method == "oracle":
        if n > ORACLE_MAX_N:
            raise UsageError(
                f"oracle refuses n={n}: Catalan({n - 2}) = {catalan(n - 2)} triangulations "
                f"(limit n ≤ {ORACLE_MAX_N})"
            )
        res = oracle_minmax(P)
        dec = res.best
        doc["oracle"] = {
            "minmax": res.minmax,
            "triangulations_searched": res.triangulations_searched,
            "chords": [list(c) for c in res.triangulation.chords],
        }
    else:
        raise UsageError(f"unknown method {method!r}")
    upper = o_n_upper(n)
    doc["members"] = [_member_entry(m) for m in dec.members]
    doc["maxLength"] = dec.max_length
    doc["bounds"] = _bounds_entry(n)
    doc["bound_check"] = {
        "maxLength_le_upper": dec.max_length <= upper + BOUND_SLACK,
        "slack": BOUND_SLACK,
    }
    c = P.centroid_point()
    doc["residuals"] = {"basmajian_at_centroid": abs(basmajian_sum(P, c) - math.pi)}

    lines = [f"{method} decomposition of an ideal {n}-gon: {len(dec.members)} orthogeodesics"]
    lines.append(f"{'sides':>10}  {'split':>8}  {'length':>14}")
    for m in dec.members:
        lines.append(f"{m.i:>4} {m.j:<5}  {m.split[0]:>3}|{m.split[1]:<4}  {m.length:14.10f}")
    lines.append(f"max length   {dec.max_length:.10f}")
    lines.append(f"2 r_n        {upper:.10f}  ({'ok' if doc['bound_check']['maxLength_le_upper'] else 'EXCEEDED'})")
    lines.append(f"lower bound  {doc['bounds']['lower']:.10f}")
    if "oracle" in doc:
        lines.append(f"triangulations searched  {doc['oracle']['triangulations_searched']}")
    print("\n".join(lines))
    if report:
        _write(report, dumps(doc))
    return doc


def _polygons(args) -> list[IdealPolygon]:
    if args.input:
        return [read_polygon(args.input)]
    return [sample(args.n, args.seed + k).polygon for k in range(args.count)]


def _check_basmajian(args, rng):
    polys = _polygons(args)
    per = args.count if args.input else 1
    worst = 0.0
    for P in polys:
        for _ in range(per):
            p = random_interior_point(P, rng)
            worst = max(worst, abs(basmajian_sum(P, p) - math.pi))
    return worst < TOL_BASMAJIAN, {"max_residual": worst, "tolerance": TOL_BASMAJIAN}


def _check_inradius(args, rng):
    polys = _polygons(args)
    per = args.count if args.input else 1
    worst = -math.inf
    for P in polys:
        bound = inradius_formula(P.n)
        for _ in range(per):
            p = random_interior_point(P, rng)
            worst = max(worst, max_inradius(P, p) - bound)
    return worst <= 1e-9, {"max_excess": worst, "tolerance": 1e-9}


def _check_bounds(args, rng):
    rows = []
    ok = True
    if args.input:
        P = read_polygon(args.input)
        polys = [P]
    else:
        for m in range(4, min(args.n, 12) + 1):
            mm = oracle_minmax(regular(m)).minmax
            lo, up = o_n_lower(m), o_n_upper(m)
            good = lo - BOUND_SLACK <= mm <= up + BOUND_SLACK
            ok &= good
            rows.append({"n": m, "regular": True, "lower": lo, "minmax": mm, "upper": up, "ok": good})
        polys = [sample(args.n, args.seed + k).polygon for k in range(args.count)]
    for P in polys:
        if P.n < 4:
            raise UsageError("bounds check needs n ≥ 4")
        up = o_n_upper(P.n)
        try:
            short = short_decomposition(P).max_length
        except DecompositionError as exc:
            ok = False
            rows.append({"n": P.n, "regular": False, "error": str(exc), "ok": False})
            continue
        good = short <= up + BOUND_SLACK
        row = {"n": P.n, "regular": False, "short_max": short, "upper": up}
        if P.n <= 10:
            mm = oracle_minmax(P).minmax
            row["minmax"] = mm
            good &= mm <= short + 1e-12
        row["ok"] = good
        ok &= good
        rows.append(row)
    failed = sum(not r["ok"] for r in rows)
    return ok, {"cases": len(rows), "failed": failed, "rows": rows}


def _check_quadid(args, rng):
    if args.input is None and args.n != 4:
        raise UsageError("quadid applies to 4-gons; use --n 4")
    worst, worst_min = 0.0, -math.inf
    bound = 2.0 * math.asinh(1.0)
    for P in _polygons(args):
        if P.n != 4:
            raise UsageError("quadid applies to 4-gons")
        x = orthogeodesic(P, 0, 2).length
        y = orthogeodesic(P, 1, 3).length
        worst = max(worst, abs(math.sinh(x / 2) * math.sinh(y / 2) - 1.0))
        worst_min = max(worst_min, min(x, y) - bound)
    ok = worst < TOL_QUAD and worst_min <= TOL_QUAD
    return ok, {"max_residual": worst, "max_min_excess": worst_min, "tolerance": TOL_QUAD}


def _check_roundtrip(args, rng):
    polys = _polygons(args)
    per = args.count if args.input else 1
    worst_spec, failures = 0.0, 0
    for P in polys:
        if P.n < 4:
            raise UsageError("roundtrip needs n ≥ 4")
        for _ in range(per):
            T = random_triangulation(P.n, rng)
            try:
                Q = reconstruct(marked_lengths(P, T), tol=TOL_RESIDUAL)
            except ReconstructionError:
                failures += 1
                continue
            d = max(abs(a - b) for a, b in zip(spectrum(P), spectrum(Q)))
            worst_spec = max(worst_spec, d)
    ok = failures == 0 and worst_spec < TOL_SPECTRUM
    return ok, {"failures": failures, "max_spectrum_error": worst_spec, "tolerance": TOL_SPECTRUM}


_CHECKS = {
    "basmajian": _check_basmajian,
    "inradius": _check_inradius,
    "bounds": _check_bounds,
    "quadid": _check_quadid,
    "roundtrip": _check_roundtrip,
}


def cmd_verify(args) -> tuple[bool, dict]:
    if args.check not in _CHECKS:
        raise UsageError(f"unknown check {args.check!r}; choose from {', '.join(CHECKS)}")
    if args.input is None:
        if args.n is None or args.n < 3:
            raise UsageError("--random needs --n ≥ 3")
        if args.count is None or args.count < 0:
            raise UsageError("--random needs --count ≥ 0")
    if args.count is None:
        args.count = 1
    rng = np.random.default_rng(args.seed)
    ok, detail = _CHECKS[args.check](args, rng)
    doc = {"format": REPORT_FORMAT, "check": args.check, "pass": bool(ok), **detail}
    summary = {k: v for k, v in detail.items() if k != "rows"}
    print(f"{args.check}: {'PASS' if ok else 'FAIL'} {json.dumps(summary)}")
    if args.report:
        _write(args.report, dumps(doc))
    return ok, doc


def bound_rows(nmax: int) -> list[dict]:
    ns = set(range(4, min(nmax, 20) + 1))
    scale = 10
    while scale <= nmax:
        ns.update(int(m * scale) for m in (2.5, 5, 10) if m * scale <= nmax)
        scale *= 10
    ns.add(nmax)
    rows = []
    for n in sorted(ns):
        lo, up = o_n_lower(n), o_n_upper(n)
        halves = o_n_lower(n, "three_halves")
        rows.append({
            "n": n,
            "lower": lo,
            "upper": up,
            "upper_ratio": up / (2.0 * math.log(n)),
            "lower_ratio": lo / (2.0 * math.log(n)),
            "lower_three_halves": halves,
            "three_halves_exceeds_upper": halves > up,
        })
    return rows


def cmd_bounds(nmax: int, as_json: bool = False) -> list[dict]:
    if nmax < 4:
        raise UsageError("nmax must be ≥ 4")
    rows = bound_rows(nmax)
    if as_json:
        sys.stdout.write(dumps({"format": REPORT_FORMAT, "rows": rows}))
        return rows
    print(f"{'n':>6}  {'lower':>13}  {'upper':>13}  {'up/2logn':>8}  {'lo/2logn':>8}  {'3/2 lower':>13}  3/2 > upper")
    for r in rows:
        print(
            f"{r['n']:>6}  {r['lower']:13.10f}  {r['upper']:13.10f}  {r['upper_ratio']:8.4f}  "
            f"{r['lower_ratio']:8.4f}  {r['lower_three_halves']:13.10f}  {'yes' if r['three_halves_exceeds_upper'] else 'no'}"
        )
    return rows


def cmd_render(path: str, layers: str, out: str) -> str:
    P = read_polygon(path)
    chosen = tuple(s.strip() for s in layers.split(",") if s.strip())
    bad = [s for s in chosen if s not in LAYERS]
    if bad:
        raise UsageError(f"unknown layer(s) {', '.join(bad)}; choose from {', '.join(LAYERS)}")
    svg = render_svg(P, chosen)
    _write(out, svg)
    return svg


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthogeo", description="Short orthogeodesic decompositions of ideal polygons.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("regular", help="write the regular ideal n-gon as JSON")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--out")

    d = sub.add_parser("decompose", help="decompose a polygon")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--method", choices=("cutlocus", "oracle"), default="cutlocus")
    d.add_argument("--report")

    v = sub.add_parser("verify", help="run a numerical property check")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input")
    src.add_argument("--random", action="store_true")
    v.add_argument("--n", type=int)
    v.add_argument("--count", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--check", required=True)
    v.add_argument("--report")

    b = sub.add_parser("bounds", help="table of the O_n bounds")
    b.add_argument("--nmax", type=int, required=True)
    b.add_argument("--json", action="store_true")

    s = sub.add_parser("render", help="draw a polygon as SVG")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--layers", default=",".join(LAYERS))
    s.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "regular":
            cmd_regular(args.n, args.out)
        elif args.command == "decompose":
            cmd_decompose(args.input, args.method, args.report)
        elif args.command == "verify":
            ok, _ = cmd_verify(args)
            return 0 if ok else 1
        elif args.command == "bounds":
            cmd_bounds(args.nmax, args.json)
        elif args.command == "render":
            cmd_render(args.input, args.layers, args.out)
        return 0
    except UsageError as exc:
        print(f"orthogeo: error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, OracleSizeError) as exc:
        print(f"orthogeo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
