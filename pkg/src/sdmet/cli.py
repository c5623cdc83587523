"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 a verification or validation
failure, 2 usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .curvature import NEGLIGIBLE_WEYL, curvature
from .equivalence import CHECKS, DEFAULT_TOLERANCES, Identification, SampleSpec, run_campaign
from .errors import SdmetError
from .geometry import ChartPoint
from .joyce import (
    JoyceConfig,
    QMarker,
    StabilizerData,
    format_stabilizer,
    is_semifree,
    joyce_field,
    parse_stabilizer,
    phi,
    validate_stabilizer,
)
from .lebrun import (
    conformal_factor_xy,
    glb_field,
    glb_rescaled_field,
    gtilde_field,
)
from .monopole import MonopoleConfig, flux_f, flux_f_halfplane, potential_V, potential_V_halfplane
from .report import dumps, write_atomic

METRICS = ("lebrun-cyl", "lebrun-rescaled", "lebrun-tilde", "joyce")
LABELS = {
    "lebrun-cyl": ("r", "tau", "z", "theta"),
    "lebrun-rescaled": ("r", "tau", "z", "theta"),
    "lebrun-tilde": ("x1", "x2", "theta", "tau"),
    "joyce": ("x1", "x2", "y1", "y2"),
}
FIELDS = ("V", "f", "conformal_factor", "det_phi")


class UsageError(Exception):
    """Bad flag values detected after argparse (exit code 2)."""


def _floats(text: str, what: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _pair(text: str, what: str) -> tuple[float, float]:
    vals = _floats(text, what)
    if len(vals) != 2:
        raise UsageError(f"{what}: expected two numbers 'a,b', got {text!r}")
    return vals[0], vals[1]


def _config(text: str) -> MonopoleConfig:
    return MonopoleConfig(tuple(_floats(text, "--heights")))


def _joyce_config(args, cfg: MonopoleConfig) -> JoyceConfig:
    if args.stab:
        pairs = parse_stabilizer(args.stab)
        boundary = _floats(args.boundary or "", "--boundary")
        return JoyceConfig(StabilizerData(pairs), (QMarker.INFINITY, QMarker.ZERO) + tuple(boundary))
    return Identification(cfg).joyce


def _metric_field(args, cfg: MonopoleConfig):
    name = args.metric
    if name == "lebrun-cyl":
        return glb_field(cfg), ChartPoint.cyl
    if name == "lebrun-rescaled":
        return glb_rescaled_field(cfg), ChartPoint.cyl
    if name == "lebrun-tilde":
        return gtilde_field(cfg), ChartPoint.halfplane
    return joyce_field(_joyce_config(args, cfg)), ChartPoint.halfplane


def _point(args, make):
    coords = _floats(args.point, "--point")
    if len(coords) != 4:
        raise UsageError(f"--point needs 4 coordinates, got {len(coords)}")
    return make(*coords)


def _record_head(args, cfg, p) -> dict:
    return {
        "metric": args.metric,
        "heights": list(cfg.heights),
        "coordinates": list(LABELS[args.metric]),
        "point": list(p.coords),
    }


def cmd_eval(args) -> int:
    cfg = _config(args.heights)
    fld, make = _metric_field(args, cfg)
    p = _point(args, make)
    if args.metric in ("lebrun-cyl", "lebrun-rescaled") and p.coords[0] <= 0.0:
        raise UsageError("LeBrun components need r > 0")
    g = np.asarray(fld(*p.coords), dtype=float)
    names = LABELS[args.metric]
    comps = {f"g_{names[i]}_{names[j]}": float(g[i, j]) for i in range(4) for j in range(i, 4)}
    record = _record_head(args, cfg, p)
    record["components"] = comps
    sys.stdout.write(dumps(record))
    return 0


def cmd_curvature(args) -> int:
    cfg = _config(args.heights)
    fld, make = _metric_field(args, cfg)
    p = _point(args, make)
    if args.metric in ("lebrun-cyl", "lebrun-rescaled") and p.coords[0] <= 0.0:
        raise UsageError("LeBrun components need r > 0")
    b = curvature(fld, p)
    negligible = b.weyl_norm < NEGLIGIBLE_WEYL
    record = _record_head(args, cfg, p)
    record.update(
        scalar=b.scalar,
        ricci_norm=b.ricci_norm,
        weyl_norm=b.weyl_norm,
        w_plus_norm=b.w_plus_norm,
        w_minus_norm=b.w_minus_norm,
        asd_ratio_plus=None if negligible else b.w_plus_norm / b.weyl_norm,
        asd_ratio_minus=None if negligible else b.w_minus_norm / b.weyl_norm,
        riemann_max_abs=float(np.max(np.abs(b.riemann))),
    )
    sys.stdout.write(dumps(record))
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args.heights)
    if cfg.n < 1:
        raise UsageError("verify needs at least one height (Joyce data has k = n + 2 >= 3)")
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = sorted(set(checks) - set(CHECKS))
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {','.join(CHECKS)}")
    tol = {c: getattr(args, f"tol_{c}") for c in CHECKS}
    spec = SampleSpec(
        count=args.samples,
        seed=args.seed,
        x1_range=_pair(args.x1_range, "--x1-range") if args.x1_range else None,
        x2_range=_pair(args.x2_range, "--x2-range"),
        exclusion=args.exclusion,
        generic_sine=args.generic_sine,
    )
    report = run_campaign(
        Identification(cfg), spec, checks, tolerances=tol, workers=args.workers, command=args.argv
    )
    text = report.to_json()
    if args.out and args.out != "-":
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    out = sys.stderr if args.out in (None, "-") else sys.stdout
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(
            f"{status} {c.name}: max {c.max_residual:.3e} mean {c.mean_residual:.3e} "
            f"tol {c.tolerance:.1e} ({c.samples} samples, {c.skipped} skipped)",
            file=out,
        )
    print(f"overall: {'PASS' if report.passed else 'FAIL'}", file=out)
    return 0 if report.passed else 1


def _field_value(name: str, cfg: MonopoleConfig, chart: str, joyce, u: float, v: float) -> float:
    try:
        if chart == "cyl":
            if name == "V":
                return float(potential_V(cfg, u, v))
            return float(flux_f(cfg, u, v))
        if name == "V":
            return float(potential_V_halfplane(cfg, u, v))
        if name == "f":
            return float(flux_f_halfplane(cfg, u, v))
        if not v > 0.0:
            return math.nan
        if name == "conformal_factor":
            return float(conformal_factor_xy(cfg, u, v))
        return float(phi(joyce, u, v).det)
    except (SdmetError, ZeroDivisionError):
        return math.nan


def dump_field(name: str, cfg: MonopoleConfig, chart: str, nx: int, ny: int, xr, yr) -> np.ndarray:
    """``(nx * ny, 3)`` array of grid coordinates and field values (NaN where undefined)."""
    joyce = Identification(cfg).joyce if name == "det_phi" else None
    rows = []
    for u in np.linspace(xr[0], xr[1], nx):
        for v in np.linspace(yr[0], yr[1], ny):
            rows.append((u, v, _field_value(name, cfg, chart, joyce, float(u), float(v))))
    return np.array(rows, dtype=float)


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else format(x, ".17g")


def cmd_dump_field(args) -> int:
    cfg = _config(args.heights)
    chart = args.chart
    if args.field in ("conformal_factor", "det_phi") and chart != "halfplane":
        raise UsageError(f"{args.field} is only defined on the half-plane chart")
    if args.field == "det_phi" and cfg.n < 1:
        raise UsageError("det_phi needs n >= 1")
    grid = _floats(args.grid, "--grid")
    if len(grid) != 2 or any(g < 2 or g != int(g) for g in grid):
        raise UsageError("--grid needs two integers >= 2, e.g. 50,50")
    nx, ny = int(grid[0]), int(grid[1])
    xr = _pair(args.x_range, "--x-range")
    yr = _pair(args.y_range, "--y-range")
    if not (xr[0] < xr[1] and yr[0] < yr[1]):
        raise UsageError("grid ranges must be increasing")
    if chart == "cyl" and (xr[0] < 0.0 or yr[0] <= 0.0):
        raise UsageError("cylindrical grid needs r >= 0 and z > 0")
    if chart == "halfplane" and yr[0] < 0.0:
        raise UsageError("half-plane grid needs x2 >= 0")
    data = dump_field(args.field, cfg, chart, nx, ny, xr, yr)
    cols = ("r", "z") if chart == "cyl" else ("x1", "x2")
    heights = ",".join(_fmt(c) for c in cfg.heights)
    if args.format == "json":
        text = dumps(
            {
                "field": args.field,
                "chart": chart,
                "heights": list(cfg.heights),
                "grid": [nx, ny],
                "columns": [cols[0], cols[1], "value"],
                "rows": [[float(a), float(b), float(c)] for a, b, c in data],
            }
        )
    else:
        buf = io.StringIO()
        buf.write(f"# field={args.field} chart={chart} heights={heights} n={cfg.n}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([cols[0], cols[1], "value"])
        for a, b, c in data:
            w.writerow([_fmt(a), _fmt(b), _fmt(c)])
        text = buf.getvalue()
    if args.out and args.out != "-":
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_joyce_validate(args) -> int:
    try:
        pairs = parse_stabilizer(args.data)
    except ValueError as exc:
        raise UsageError(f"cannot parse stabilizer data: {exc}") from None
    print(f"data: {format_stabilizer(pairs)}")
    problems = validate_stabilizer(pairs)
    if problems:
        print("valid: no")
        for msg in problems:
            print(f"  violation: {msg}")
        return 1
    print("valid: yes")
    sf = is_semifree(pairs)
    if sf.semifree:
        wit = ", ".join(f"G({m},{n})" for m, n in sf.witnesses)
        print(f"semi-free: yes (witness {wit})")
    else:
        print("semi-free: no")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdmet",
        description="Toric LeBrun and Joyce metrics: evaluation and verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("--heights", required=True, help="comma-separated increasing heights")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--checks", default=",".join(CHECKS), help=f"subset of {','.join(CHECKS)}")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--x1-range", help="a,b (default: symmetric window covering all boundary images)")
    v.add_argument("--x2-range", default="0.05,20")
    v.add_argument("--exclusion", type=float, default=0.05)
    v.add_argument("--generic-sine", type=float, default=0.1, help="min x2/R for curvature checks")
    v.add_argument("--workers", type=int, default=None, help="capped by SDMET_THREADS")
    for c in CHECKS:
        v.add_argument(f"--tol-{c.replace('_', '-')}", dest=f"tol_{c}", type=float, default=DEFAULT_TOLERANCES[c])
    v.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("eval", cmd_eval, "print metric components at a point"),
        ("curvature", cmd_curvature, "print a curvature summary at a point"),
    ):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("--metric", choices=METRICS, required=True)
        e.add_argument("--heights", default="", help="comma-separated heights (empty for n = 0)")
        e.add_argument("--point", required=True, help="four comma-separated coordinates")
        e.add_argument("--stab", help="joyce only: stabilizer data 'm,n;m,n;...'")
        e.add_argument("--boundary", help="joyce only: finite boundary points after inf, 0")
        e.set_defaults(func=func)

    d = sub.add_parser("dump-field", help="tabulate a scalar field on a grid")
    d.add_argument("--field", choices=FIELDS, required=True)
    d.add_argument("--heights", default="")
    d.add_argument("--chart", choices=("halfplane", "cyl"), default="halfplane")
    d.add_argument("--grid", default="50,50", help="nx,ny")
    d.add_argument("--x-range", default="-5,5")
    d.add_argument("--y-range", default="0.05,5")
    d.add_argument("--format", choices=("csv", "json"), default="csv")
    d.add_argument("--out", help="output path (default: stdout)")
    d.set_defaults(func=cmd_dump_field)

    j = sub.add_parser("joyce-validate", help="validate and classify stabilizer data")
    j.add_argument("data", help="e.g. '0,1;1,2;1,1;1,0'")
    j.set_defaults(func=cmd_joyce_validate)
    return parser


# flags whose values may legitimately start with '-'
_SIGNED = {"--point", "--x-range", "--y-range", "--x1-range", "--boundary", "--heights"}


def _glue_signed(argv: list[str]) -> list[str]:
    """Turn ``--x-range -5,5`` into ``--x-range=-5,5`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_glue_signed(argv))
    args.argv = tuple(argv)
    try:
        return args.func(args)
    except (UsageError, SdmetError) as exc:
        print(f"sdmet {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
