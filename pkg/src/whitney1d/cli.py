"""Command-line front end.

Subcommands: ``extend`` builds the interpolating extension and samples it,
``functionals`` evaluates the trace functionals without gluing a global
function unless needed, ``constants`` prints the order-dependent constant
table, ``selftest`` runs the randomized invariant checks.  All JSON output
is deterministic: fixed key order and printf-style %.17g floats.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .config import load_tolerances, snapshot
from .divdiff import SampledFunction
from .errors import (
    DuplicatePointsError,
    InputFormatError,
    InsufficientDataError,
    InvalidParameterError,
    NumericalFailureError,
)

__all__ = ["RunConfig", "main", "read_input", "render_json"]

SCHEMA = "trace-report/1"


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the data-processing commands."""

    m: int
    p: float
    samples: int = 257
    pad: float = 0.25

    def __post_init__(self):
        if not (1 <= self.m <= 8):
            raise InvalidParameterError("m must be an integer in [1, 8]")
        if not (math.isinf(self.p) or self.p > 1.0):
            raise InvalidParameterError("p must be a real > 1 or inf")
        if self.samples < 2:
            raise InvalidParameterError("samples must be >= 2")
        if not (self.pad >= 0.0 and math.isfinite(self.pad)):
            raise InvalidParameterError("pad must be a finite nonnegative real")


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise InvalidParameterError(f"cannot parse p value {text!r}")


# ---------------------------------------------------------------------------
# input / output

def _read_csv(path: str) -> SampledFunction:
    rows = []
    with open(path, newline="") as fh:
        for lineno, raw in enumerate(csv.reader(fh), start=1):
            if not raw or (raw[0].lstrip().startswith("#")):
                continue
            if len(raw) < 2:
                raise InputFormatError(
                    f"{path}: row {lineno}: expected two columns, got {len(raw)}"
                )
            try:
                x = float(raw[0])
                v = float(raw[1])
            except ValueError:
                if not rows:
                    continue  # header line
                raise InputFormatError(
                    f"{path}: row {lineno}: non-numeric entry {raw[:2]!r}"
                )
            if not (math.isfinite(x) and math.isfinite(v)):
                raise InputFormatError(
                    f"{path}: row {lineno}: non-finite entry {raw[:2]!r}"
                )
            rows.append((lineno, x, v))
    if not rows:
        raise InputFormatError(f"{path}: no data rows")
    rows.sort(key=lambda r: r[1])
    for (la, xa, _), (lb, xb, _) in zip(rows, rows[1:]):
        if xb == xa:
            raise DuplicatePointsError(
                f"{path}: duplicate x value {xa!r} at input rows {la} and {lb}"
            )
    return SampledFunction([r[1] for r in rows], [r[2] for r in rows])


def _read_json(path: str) -> SampledFunction:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"{path}: invalid JSON: {exc}")
    if not isinstance(obj, dict) or "points" not in obj or "values" not in obj:
        raise InputFormatError(f"{path}: expected an object with points and values")
    pts = obj["points"]
    vals = obj["values"]
    if not isinstance(pts, list) or not isinstance(vals, list):
        raise InputFormatError(f"{path}: points and values must be arrays")
    try:
        x = np.asarray([float(t) for t in pts])
        v = np.asarray([float(t) for t in vals])
    except (TypeError, ValueError):
        raise InputFormatError(f"{path}: points and values must be numeric")
    order = np.argsort(x, kind="stable")
    return SampledFunction(x[order], v[order])


def read_input(path: str) -> SampledFunction:
    """Load a data set from a two-column CSV or a points/values JSON file."""
    if path.lower().endswith(".json"):
        return _read_json(path)
    return _read_csv(path)


def render_json(obj) -> str:
    """Serialize with fixed key order and %.17g floats; inf becomes "inf"."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        if math.isnan(x):
            return '"nan"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(render_json(t) for t in obj) + "]"
    if isinstance(obj, dict):
        items = ", ".join(
            f"{json.dumps(str(k))}: {render_json(v)}" for k, v in obj.items()
        )
        return "{" + items + "}"
    raise InvalidParameterError(f"cannot serialize {type(obj).__name__}")


def _report_dict(rep) -> dict:
    return {
        "schema": SCHEMA,
        "m": rep.m,
        "p": rep.p,
        "n_points": rep.n_points,
        "variational": rep.variational,
        "variational_mode": rep.variational_mode,
        "deboor": rep.deboor,
        "jet_value": rep.jet_value,
        "sharp_lp": rep.sharp_lp,
        "whitney_seminorm": rep.whitney_seminorm,
        "oracle_seminorm": rep.oracle_seminorm,
        "ratios": dict(sorted(rep.ratios.items())),
        "constants_used": rep.constants_used,
    }


def _write_report(path: str, payload: dict):
    with open(path, "w") as fh:
        fh.write(render_json(payload) + "\n")


def _sample_grid(f: SampledFunction, cfg: RunConfig) -> np.ndarray:
    span = f.span if f.span > 0 else 1.0
    lo = float(f.points[0]) - cfg.pad * span
    hi = float(f.points[-1]) + cfg.pad * span
    return np.unique(np.concatenate([np.linspace(lo, hi, cfg.samples), f.points]))


def _write_samples(path: str, f: SampledFunction, ext, cfg: RunConfig):
    grid = _sample_grid(f, cfg)
    cols = [grid, ext.F(grid)]
    D = ext.F
    for _ in range(cfg.m):
        D = D.derivative()
        cols.append(D(grid))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "F"] + [f"F{d}" for d in range(1, cfg.m + 1)])
        for row in zip(*cols):
            w.writerow([format(t, ".17g") for t in row])


# ---------------------------------------------------------------------------
# subcommands

def _cmd_extend(args) -> int:
    tol = load_tolerances()
    cfg = RunConfig(m=args.m, p=_parse_p(args.p), samples=args.samples, pad=args.pad)
    f = read_input(args.input)
    from .functionals import trace_report
    from .extension import whitney_extend

    rep = trace_report(f, cfg.m, cfg.p, with_extension=True,
                       with_oracle=args.oracle, with_sharp=args.sharp, tol=tol)
    ext = whitney_extend(f, cfg.m, tol=tol)
    if args.out:
        _write_samples(args.out, f, ext, cfg)
    if args.report:
        _write_report(args.report, _report_dict(rep))
    pstr = "inf" if math.isinf(cfg.p) else format(cfg.p, "g")
    print(f"extended {len(f)} points with order {cfg.m}, p={pstr}")
    if rep.whitney_seminorm is not None:
        print(f"seminorm {rep.whitney_seminorm:.12g}")
    print(f"variational {rep.variational:.12g} ({rep.variational_mode})")
    if args.out:
        print(f"samples written to {args.out}")
    if args.report:
        print(f"report written to {args.report}")
    return 0


def _cmd_functionals(args) -> int:
    tol = load_tolerances()
    cfg = RunConfig(m=args.m, p=_parse_p(args.p))
    f = read_input(args.input)
    from .functionals import trace_report

    rep = trace_report(f, cfg.m, cfg.p, with_extension=False,
                       with_oracle=args.oracle, with_sharp=args.sharp, tol=tol)
    if args.report:
        _write_report(args.report, _report_dict(rep))
    pstr = "inf" if math.isinf(cfg.p) else format(cfg.p, "g")
    print(f"functionals for {len(f)} points, order {cfg.m}, p={pstr}")
    print(f"variational {rep.variational:.12g} ({rep.variational_mode})")
    if rep.deboor is not None:
        print(f"deboor {rep.deboor:.12g}")
    if rep.jet_value is not None:
        print(f"jet {rep.jet_value:.12g}")
    if rep.sharp_lp is not None:
        print(f"sharp_lp {rep.sharp_lp:.12g}")
    if rep.oracle_seminorm is not None:
        print(f"oracle_seminorm {rep.oracle_seminorm:.12g}")
    if args.report:
        print(f"report written to {args.report}")
    return 0


def _cmd_constants(args) -> int:
    from .functionals import constants_table

    if not (1 <= args.m <= 8):
        raise InvalidParameterError("m must be an integer in [1, 8]")
    c = constants_table(args.m)
    if args.json:
        payload = {
            "schema": "constants-table/1",
            "m": c.m,
            "finiteness_lower": c.finiteness_lower,
            "finiteness_upper": c.finiteness_upper,
            "finiteness_exact": c.finiteness_exact,
            "theta": c.theta,
            "theta_exact": c.theta_exact,
            "deboor_upper": c.deboor_upper,
            "favard_exact": c.favard_exact,
        }
        print(render_json(payload))
    else:
        print(f"order m = {c.m}")
        print(f"  finiteness constant in [{c.finiteness_lower:.12g}, "
              f"{c.finiteness_upper:.12g}]"
              + (f" (exact {c.finiteness_exact:g})" if c.finiteness_exact else ""))
        print(f"  alternating-data constant theta = {c.theta:.12g}"
              + (f" (exact {c.theta_exact:g})" if c.theta_exact else ""))
        print(f"  consecutive-window upper constant = {c.deboor_upper:.12g}")
        if c.favard_exact:
            print(f"  uniform-norm constant = {c.favard_exact:g} (exact)")
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    tol = load_tolerances()
    result = run_selftest(args.seed, args.instances,
                          with_oracle=not args.no_oracle,
                          inject_smoothness_fault=args.inject_fault, tol=tol)
    for name, ok in result["checks"].items():
        print(f"  {'PASS' if ok else 'FAIL'}  {name}")
    if args.report:
        payload = dict(result)
        payload["schema"] = "selftest/1"
        payload["tolerances"] = snapshot(tol)
        _write_report(args.report, payload)
        print(f"report written to {args.report}")
    if result["passed"]:
        print(f"selftest passed ({result['instances']} instances, seed {result['seed']})")
        return 0
    print("selftest FAILED:")
    for line in result["failures"]:
        print(f"  {line}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="whitney1d",
        description="Interpolating extensions of minimal smoothness-seminorm "
                    "growth, and the trace functionals that certify them.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ext = sub.add_parser("extend", help="build and sample the extension")
    ext.add_argument("--input", required=True, help="CSV (x,f) or JSON file")
    ext.add_argument("-m", type=int, required=True, help="smoothness order")
    ext.add_argument("-p", required=True, help="integrability exponent (> 1 or inf)")
    ext.add_argument("--samples", type=int, default=257)
    ext.add_argument("--pad", type=float, default=0.25,
                     help="padding beyond the data, in units of the span")
    ext.add_argument("--out", help="write sampled values as CSV")
    ext.add_argument("--report", help="write the functional report as JSON")
    ext.add_argument("--oracle", action="store_true",
                     help="also solve the p=2 optimal seminorm problem")
    ext.add_argument("--sharp", action="store_true",
                     help="also integrate the sharp maximal function")
    ext.set_defaults(fn=_cmd_extend)

    fun = sub.add_parser("functionals", help="evaluate the trace functionals")
    fun.add_argument("--input", required=True)
    fun.add_argument("-m", type=int, required=True)
    fun.add_argument("-p", required=True)
    fun.add_argument("--report")
    fun.add_argument("--oracle", action="store_true")
    fun.add_argument("--sharp", action="store_true")
    fun.set_defaults(fn=_cmd_functionals)

    con = sub.add_parser("constants", help="print the constants table")
    con.add_argument("-m", type=int, required=True)
    con.add_argument("--json", action="store_true")
    con.set_defaults(fn=_cmd_constants)

    st = sub.add_parser("selftest", help="run randomized invariant checks")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--instances", type=int, default=40)
    st.add_argument("--report")
    st.add_argument("--inject-fault", action="store_true")
    st.add_argument("--no-oracle", action="store_true")
    st.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DuplicatePointsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
