"""Command-line front end: list, verify, classify, sample.

Exit codes: 0 when every asserted check passes its tolerance, 1 when any
asserted check fails, 2 on a lower-level error (bad domain, violated side
condition, degenerate metric, unparsable input).

Inline charts: pass five semicolon-separated expressions in s, t, u, v as
the target, e.g. ``biconserve verify "t; u; s; v; 0"``.  The expression
grammar is infix with ^ or ** for powers (exponents are numeric literals),
the functions sin, cos, sinh, cosh, exp, sqrt, and named profile calls such
as ``phi(s)`` resolved against the profile options below.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .catalog import CATALOG, FamilySpec, build, list_entries, pattern_matches
from .errors import BiconserveError
from .expr import parse as parse_expr
from .immersion import ImmersionChart, packet
from .profiles import ExprProfile
from .ambient import Signature
from .spectral import CLUSTER_TOL, eigen_structure
from .sweep import (DEFAULT_TOLERANCES, HYPERSURFACE_CHECKS, LOWDIM_CHECKS,
                    CheckSummary, grid_points, random_points, summarize, sweep)

SCHEMA = 1


@dataclass
class VerifyRequest:
    target: str
    parameters: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    domain: list | None = None          # numeric per-axis [lo, hi]
    grid: list | None = None            # numeric per-axis [lo, hi, n]
    domain_spec: str | None = None      # raw text, resolved against var names
    grid_spec: str | None = None
    random_points: int | None = None
    seed: int = 0
    checks: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    oracle: str = "jets"
    jobs: int = 1
    output: str | None = None
    fmt: str = "json"
    per_point: bool = False


def _target_var_names(target: str, parameters: dict):
    if _is_inline(target):
        n = max(len([e for e in target.split(";") if e.strip()]) - 1, 1)
        return ("s", "t", "u", "v")[:n]
    key = target
    entry = CATALOG.get(key)
    if entry is None:
        return ("s", "t", "u", "v")
    if entry.kind == "surface":
        return ("t", "u")
    if entry.kind == "curve":
        return ("v",)
    if key == "rem42":
        n = int(parameters.get("n", entry.params["n"]))
        return ("s",) + tuple(f"t{i}" for i in range(1, n))
    return ("s", "t", "u", "v")


def _is_inline(target: str) -> bool:
    return ";" in target


def _resolve_specs(req: VerifyRequest):
    """Turn textual axis specs into numeric domain/grid lists."""
    if not (req.domain_spec or req.grid_spec):
        return
    names = list(_target_var_names(req.target, req.parameters))
    entry = CATALOG.get(req.target)
    if req.domain_spec:
        if entry and entry.domain:
            base = [list(d) for d in entry.domain]
        else:
            base = [list(d) for d in (req.domain or [[-0.8, 0.8]] * len(names))]
        while len(base) < len(names):
            base.append([-0.8, 0.8])
        for idx, (lo, hi, _) in _parse_axis_spec(req.domain_spec, names).items():
            base[idx] = [lo, hi]
        req.domain = base
        req.domain_spec = None
    if req.grid_spec:
        spec = _parse_axis_spec(req.grid_spec, names)
        if req.domain:
            base = [[lo, hi, 5] for lo, hi in req.domain]
        elif entry and entry.domain:
            base = [[lo + 0.06 * (hi - lo), hi - 0.06 * (hi - lo), 5]
                    for lo, hi in entry.domain]
        else:
            base = [[-0.8, 0.8, 5] for _ in names]
        while len(base) < len(names):
            base.append([-0.8, 0.8, 5])
        for idx, (lo, hi, n) in spec.items():
            base[idx] = [lo, hi, n if n else 5]
        req.grid = base
        req.grid_spec = None


def _build_target(req: VerifyRequest):
    """Returns (chart, entry_or_None)."""
    _resolve_specs(req)
    if _is_inline(req.target):
        exprs = [e.strip() for e in req.target.split(";") if e.strip()]
        names = ("s", "t", "u", "v")[: max(len(exprs) - 1, 1)]
        bank = {}
        for pname in ("phi", "psi", "phi1", "phi2"):
            if pname in req.profiles:
                bank[pname] = ExprProfile(parse_expr(str(req.profiles[pname]), ("s",)))
        domain = req.domain or [(-0.8, 0.8)] * len(names)
        comps = tuple(parse_expr(e, names) for e in exprs)
        chart = ImmersionChart(
            components=comps, domain=tuple(tuple(d) for d in domain),
            profile_bank=bank, signature=Signature(len(comps), 2),
            expected_index=2 if len(names) == 4 else int(req.parameters.get("index", 2)),
            name="inline",
        )
        return chart, None
    family, _, case = req.target.partition(".")
    spec = FamilySpec(family, case, dict(req.parameters), dict(req.profiles),
                      tuple(tuple(d) for d in req.domain) if req.domain else None)
    entry = CATALOG.get(spec.key)
    if entry is None:
        raise BiconserveError(f"unknown target {req.target!r}")
    return build(spec), entry


def _default_grid(chart: ImmersionChart, nodes: int = 5):
    out = []
    for lo, hi in chart.domain:
        pad = 0.06 * (hi - lo)
        out.append([lo + pad, hi - pad, nodes])
    return out


def _resolve_points(req: VerifyRequest, chart: ImmersionChart):
    grid = req.grid or _default_grid(chart)
    if len(grid) != chart.nparams:
        raise BiconserveError(
            f"grid has {len(grid)} axes, chart has {chart.nparams} parameters")
    for (lo, hi, n), (dlo, dhi) in zip(grid, chart.domain):
        if n < 2:
            raise BiconserveError("grid needs at least 2 nodes per axis")
        if lo < dlo - 1e-12 or hi > dhi + 1e-12:
            raise BiconserveError(
                f"grid range [{lo:g}, {hi:g}] outside chart domain [{dlo:g}, {dhi:g}]")
    if req.random_points:
        pts = random_points([(lo, hi) for lo, hi, _ in grid], req.random_points, req.seed)
    else:
        pts = grid_points([(lo, hi) for lo, hi, _ in grid], [n for _, _, n in grid])
    return grid, pts


def _assertion_set(req: VerifyRequest, entry, explicit_checks):
    asserted = {"beltrami", "gauss", "codazzi", "unit_normal"}
    family = (entry.key.split(".")[0] if entry else "inline")
    if family in ("ex41", "rem42"):
        asserted |= {"biconservative", "principal_direction", "structure"}
    if entry and entry.kind == "hypersurface" and family.startswith("thm"):
        asserted.add("structure")
    asserted |= set(explicit_checks or [])
    return asserted


def run_verify(req: VerifyRequest):
    """Execute a verification request; returns (report_dict, exit_code)."""
    chart, entry = _build_target(req)
    grid, pts = _resolve_points(req, chart)
    if chart.codim == 1:
        checks = list(req.checks) if req.checks else list(HYPERSURFACE_CHECKS)
    else:
        checks = [c for c in (req.checks or LOWDIM_CHECKS) if c in LOWDIM_CHECKS]
    tol = dict(DEFAULT_TOLERANCES)
    if req.oracle == "fd":
        tol["biconservative"] = tol["biconservative_fd"]
        tol["principal_direction"] = tol["biconservative_fd"]
    tol.update(req.tolerances)
    asserted = _assertion_set(req, entry, req.checks)

    rows = sweep(chart, pts, checks, oracle=req.oracle, jobs=req.jobs)
    summaries = summarize(rows, checks, tol, asserted)

    spectral = {}
    structure_status = None
    if "structure" in checks and chart.codim == 1:
        labels = {}
        patterns = {}
        fam_ok = True
        for r in rows:
            if r.error:
                fam_ok = False
                continue
            labels[r.label] = labels.get(r.label, 0) + 1
            patterns[r.pattern] = patterns.get(r.pattern, 0) + 1
        tag = entry.structure[0] if entry and entry.structure else ""
        if tag:
            for r in rows:
                if r.error:
                    continue
                if r.spectrum is None:
                    ok = r.label not in ("", "unresolved")
                else:
                    ok, _ = pattern_matches(tag, r.spectrum)
                if not ok:
                    fam_ok = False
                    break
        curv = [r.curvatures for r in rows if r.curvatures]
        spectral = {
            "labels": labels,
            "patterns": patterns,
            "curvature_min": min(min(c) for c in curv) if curv else None,
            "curvature_max": max(max(c) for c in curv) if curv else None,
        }
        structure_status = "pass" if fam_ok else "fail"
        if "structure" not in asserted:
            structure_status = "not_asserted" if fam_ok else "fail"
        summaries.append(CheckSummary("structure", 0.0 if fam_ok else 1.0, 0.0,
                                      None, len(rows), None, structure_status))

    errored = any(s.status == "error" for s in summaries)
    failed = any(s.status == "fail" and s.name in asserted | {"structure"}
                 for s in summaries)
    code = 2 if errored else (1 if failed else 0)

    report = {
        "schema": SCHEMA,
        "tool": "biconserve",
        "version": __version__,
        "target": req.target,
        "passed": code == 0,
        "exit_code": code,
        "config": {
            "target": req.target,
            "parameters": req.parameters,
            "profiles": req.profiles,
            "domain": req.domain,
            "grid": grid,
            "random_points": req.random_points,
            "seed": req.seed,
            "checks": req.checks,
            "tolerances": req.tolerances,
            "oracle": req.oracle,
            "jobs": req.jobs,
        },
        "checks": [
            {
                "name": s.name,
                "max": s.max,
                "mean": s.mean,
                "argmax_point": list(s.argmax_point) if s.argmax_point else None,
                "count": s.count,
                "tolerance": s.tolerance,
                "status": s.status,
            }
            for s in summaries
        ],
        "spectral": spectral,
    }
    if req.per_point:
        report["rows"] = [
            {"point": list(r.point), "values": r.values, "H": r.H,
             "label": r.label, "error": r.error}
            for r in rows
        ]
    return report, code


# -- output helpers ---------------------------------------------------------


def _write_report(report: dict, req: VerifyRequest, stream):
    if req.fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True)
        if req.output:
            with open(req.output, "w") as fh:
                fh.write(text + "\n")
        else:
            stream.write(text + "\n")
        return
    # csv: one row per check
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "max", "mean", "count", "tolerance", "status"])
    for c in report["checks"]:
        writer.writerow([c["name"], repr(c["max"]), repr(c["mean"]), c["count"],
                         "" if c["tolerance"] is None else repr(c["tolerance"]),
                         c["status"]])
    if req.output:
        with open(req.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        stream.write(buf.getvalue())


def _print_summary(report: dict, stream):
    stream.write(f"target {report['target']}: "
                 f"{'PASS' if report['passed'] else 'FAIL'}\n")
    for c in report["checks"]:
        tol = "" if c["tolerance"] is None else f" tol={c['tolerance']:g}"
        stream.write(f"  {c['name']:<20s} max={c['max']:.3e} "
                     f"mean={c['mean']:.3e}{tol} [{c['status']}]\n")


# -- subcommands -------------------------------------------------------------


def cmd_list(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    rows = list_entries(args.family)
    if args.json:
        out.write(json.dumps(rows, indent=2, sort_keys=True) + "\n")
        return 0
    for r in rows:
        conds = "; ".join(r["conditions"]) if r["conditions"] else "-"
        out.write(f"{r['key']:<14s} {r['kind']:<12s} {r['description']}\n")
        out.write(f"{'':14s} conditions: {conds}\n")
    out.write(f"{len(rows)} catalog entries\n")
    return 0


def _parse_axis_spec(text: str, names):
    """'s=0.6:1.4:5,t=-0.5:0.5:5,...' or positional 'lo:hi:n,...'."""
    out = {}
    for i, part in enumerate(x for x in text.split(",") if x.strip()):
        part = part.strip()
        if "=" in part:
            name, _, spec = part.partition("=")
            idx = names.index(name.strip())
        else:
            idx, spec = i, part
        bits = spec.split(":")
        if len(bits) == 2:
            out[idx] = (float(bits[0]), float(bits[1]), None)
        else:
            out[idx] = (float(bits[0]), float(bits[1]), int(bits[2]))
    return out


def _request_from_args(args) -> VerifyRequest:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
    req = VerifyRequest(target=args.target or cfg.get("target", ""))
    for key in ("parameters", "profiles", "tolerances"):
        req.__setattr__(key, dict(cfg.get(key) or {}))
    req.domain = cfg.get("domain")
    req.grid = cfg.get("grid")
    req.random_points = cfg.get("random_points")
    req.seed = int(cfg.get("seed", 0))
    req.checks = list(cfg.get("checks") or [])
    req.oracle = cfg.get("oracle", "jets")
    req.jobs = int(cfg.get("jobs", 0) or 0)

    for pname in ("a", "b", "c", "R", "A", "phi0", "psi0"):
        val = getattr(args, pname, None)
        if val is not None:
            req.parameters[pname] = val
    if getattr(args, "n", None) is not None:
        req.parameters["n"] = args.n
    if getattr(args, "offsets", None):
        req.parameters["a"] = tuple(float(x) for x in args.offsets.split(","))
    if getattr(args, "solve_psi", False):
        req.profiles["solve_psi"] = True
    for pname in ("psi", "phi", "phi1", "phi2", "theta"):
        val = getattr(args, pname, None)
        if val is not None:
            req.profiles[pname] = val
    if getattr(args, "psi", None) is not None and not getattr(args, "solve_psi", False):
        req.profiles.pop("solve_psi", None)  # an explicit profile wins
    if getattr(args, "c", None) is not None:
        req.profiles["c"] = args.c
    if getattr(args, "phi0", None) is not None:
        req.profiles["phi0"] = args.phi0
    if getattr(args, "psi0", None) is not None:
        req.profiles["psi0"] = args.psi0

    if getattr(args, "domain", None):
        req.domain_spec = args.domain
    if getattr(args, "grid", None):
        req.grid_spec = args.grid
    if getattr(args, "checks", None):
        req.checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for tname in ("biconservative", "beltrami", "gauss", "codazzi",
                  "principal_direction", "unit_normal"):
        val = getattr(args, f"tol_{tname}", None)
        if val is not None:
            req.tolerances[tname] = val
    if getattr(args, "random_points", None) is not None:
        req.random_points = args.random_points
    if getattr(args, "seed", None) is not None:
        req.seed = args.seed
    if getattr(args, "oracle", None):
        req.oracle = args.oracle
    jobs = getattr(args, "jobs", None)
    if jobs is None or jobs == 0:
        jobs = req.jobs or int(os.environ.get("BICONSERVE_JOBS", "1"))
    req.jobs = max(1, jobs)
    req.output = getattr(args, "output", None)
    req.fmt = getattr(args, "format", "json") or "json"
    req.per_point = bool(getattr(args, "per_point", False))
    return req


def cmd_verify(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    req = None
    try:
        req = _request_from_args(args)
        report, code = run_verify(req)
    except BiconserveError as exc:
        target = f" [{req.target}]" if req else ""
        out.write(f"error{target}: {exc}\n")
        return 2
    _print_summary(report, out)
    if req.output or args.emit_report:
        _write_report(report, req, out)
    return code


def cmd_classify(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        tol = args.tol if args.tol else CLUSTER_TOL
        if args.matrix:
            S = np.array([float(x) for x in args.matrix.split(",")], dtype=float)
            if S.size != 16:
                raise BiconserveError("--matrix needs 16 comma-separated entries")
            S = S.reshape(4, 4)
            if args.metric:
                G = np.array([float(x) for x in args.metric.split(",")]).reshape(4, 4)
            else:
                G = np.diag([-1.0, -1.0, 1.0, 1.0])
            spec = eigen_structure(S, G, tol)
        else:
            req = _request_from_args(args)
            chart, _ = _build_target(req)
            if args.at:
                point = [float(x) for x in args.at.split(",")]
            else:
                point = list(chart.center())
            pk = packet(chart, point)
            spec = eigen_structure(pk.S, pk.G, tol)
            out.write(f"H = {pk.H!r}\n")
    except BiconserveError as exc:
        out.write(f"error: {exc}\n")
        return 2
    if spec.case_label == "unresolved":
        out.write("Case unresolved\n")
        return 1
    if spec.pattern and all(p in ("1", "2c") for p in spec.pattern.split("+")) \
            and not spec.complex_pairs:
        desc = f"{len(spec.real_eigenvalues)} distinct"
    else:
        desc = f"pattern {spec.pattern}"
    out.write(f"Case {spec.case_label}, {desc}\n")
    for v, alg, geo in sorted(spec.real_eigenvalues):
        out.write(f"  eigenvalue {float(v)!r} (algebraic {alg}, geometric {geo})\n")
    for re_, im_ in spec.complex_pairs:
        out.write(f"  complex pair {float(re_)!r} +/- {float(im_)!r} i\n")
    return 0


def cmd_sample(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        req = _request_from_args(args)
        chart, _ = _build_target(req)
        grid, pts = _resolve_points(req, chart)
        checks = ["biconservative", "beltrami", "gauss", "codazzi", "curvatures"] \
            if chart.codim == 1 else list(LOWDIM_CHECKS)
        rows = sweep(chart, pts, checks, oracle=req.oracle, jobs=req.jobs)
    except BiconserveError as exc:
        out.write(f"error: {exc}\n")
        return 2
    names = ["s", "t", "u", "v"][: chart.nparams] if chart.nparams <= 4 else \
        ["s"] + [f"t{i}" for i in range(1, chart.nparams)]
    kcols = [f"k{i+1}" for i in range(chart.nparams)] if chart.codim == 1 else []
    all_cols = names + (["H"] if chart.codim == 1 else []) + kcols + \
        ["biconservative", "beltrami", "gauss", "codazzi"]
    cols = [c.strip() for c in args.columns.split(",")] if args.columns else all_cols
    unknown = [c for c in cols if c not in all_cols]
    if unknown:
        out.write(f"error: unknown columns {unknown}\n")
        return 2
    sink = open(req.output, "w", newline="") if req.output else out
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        record = dict(zip(names, r.point))
        if chart.codim == 1:
            record["H"] = r.H
            ks = r.curvatures or ()
            for i, c in enumerate(kcols):
                record[c] = ks[i] if i < len(ks) else ""
        for nm in ("biconservative", "beltrami", "gauss", "codazzi"):
            record[nm] = r.values.get(nm, "")
        writer.writerow([repr(record[c]) if isinstance(record[c], float) else record[c]
                         for c in cols])
    if req.output:
        sink.close()
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="biconserve",
        description="numerical verification of curvature identities and the "
                    "shape-operator tangency condition for index-2 hypersurface charts",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list catalog entries")
    p_list.add_argument("--family", help="filter by family prefix (thm1, intsurf, ...)")
    p_list.add_argument("--json", action="store_true")
    p_list.set_defaults(fn=cmd_list)

    def common(p):
        p.add_argument("target", nargs="?", default=None,
                       help="catalog key or inline ';'-separated expressions")
        p.add_argument("--config", help="JSON file mirroring the request; flags override")
        p.add_argument("--a", type=float)
        p.add_argument("--b", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--R", type=float)
        p.add_argument("--A", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--offsets", help="comma-separated offset constants (rem42)")
        p.add_argument("--solve-psi", action="store_true", dest="solve_psi")
        p.add_argument("--psi")
        p.add_argument("--phi")
        p.add_argument("--phi1")
        p.add_argument("--phi2")
        p.add_argument("--theta")
        p.add_argument("--phi0", type=float)
        p.add_argument("--psi0", type=float)
        p.add_argument("--domain", help="axis ranges, e.g. 's=0.5:2,t=-1:1'")
        p.add_argument("--grid", help="axis grids, e.g. 's=0.6:1.4:5,t=-0.5:0.5:5'")
        p.add_argument("--random-points", type=int, dest="random_points")
        p.add_argument("--seed", type=int)
        p.add_argument("--oracle", choices=("jets", "fd"))
        p.add_argument("--jobs", type=int, default=0,
                       help="worker processes (default: BICONSERVE_JOBS or 1)")
        p.add_argument("--output")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_ver = sub.add_parser("verify", help="run verification checks over a grid")
    common(p_ver)
    p_ver.add_argument("--checks",
                       help="comma list: biconservative,beltrami,gauss,codazzi,"
                            "unit_normal,principal_direction,structure")
    for tname in ("biconservative", "beltrami", "gauss", "codazzi",
                  "principal_direction", "unit_normal"):
        p_ver.add_argument(f"--tol-{tname.replace('_', '-')}", type=float,
                           dest=f"tol_{tname}")
    p_ver.add_argument("--per-point", action="store_true", dest="per_point")
    p_ver.add_argument("--emit-report", action="store_true", dest="emit_report",
                       help="print the JSON/CSV report to stdout as well")
    p_ver.set_defaults(fn=cmd_verify)

    p_cls = sub.add_parser("classify", help="classify the shape operator at a point")
    common(p_cls)
    p_cls.add_argument("--at", help="comma-separated parameter point")
    p_cls.add_argument("--matrix", help="16 comma-separated operator entries")
    p_cls.add_argument("--metric", help="16 comma-separated metric entries")
    p_cls.add_argument("--tol", type=float)
    p_cls.set_defaults(fn=cmd_classify)

    p_smp = sub.add_parser("sample", help="stream per-point data as CSV")
    common(p_smp)
    p_smp.add_argument("--columns", help="subset of output columns")
    p_smp.set_defaults(fn=cmd_sample)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BiconserveError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
