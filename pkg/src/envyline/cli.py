"""Command-line front end: frontier tables, error curves, LRM tuning and verification.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from typing import Any, Callable, Optional, Sequence

from . import __version__, analysis, verify
from .analysis import GuaranteePair
from .mechanisms import Kind, MechanismSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUITES = ("all", "guarantees", "sp", "reduction", "dominance", "lowerbound")

ALPHA_MECHS: dict[str, Callable[[float], GuaranteePair]] = {
    "bim": analysis.bim_guarantees,
    "birm": analysis.birm_guarantees,
}
BIAS_MECHS: dict[str, Callable[[float], GuaranteePair]] = {
    "bam": analysis.bam_guarantees,
    "balrm": analysis.balrm_guarantees,
}


class CliUsageError(Exception):
    pass


# --- parsing -------------------------------------------------------------------


def parse_grid(text: str) -> list[float]:
    """``lo:hi:step`` with both ends included (the last point snaps to ``hi``), or one number."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise CliUsageError(f"bad grid {text!r}; expected lo:hi:step or a number") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise CliUsageError(f"bad grid {text!r}; expected lo:hi:step")
    lo, hi, step = nums
    if not (step > 0 and lo <= hi) or not all(map(math.isfinite, nums)):
        raise CliUsageError(f"bad grid {text!r}; need lo <= hi and step > 0")
    count = int(math.floor((hi - lo) / step + 1e-9))
    points = [round(lo + k * step, 12) for k in range(count + 1)]
    if abs(points[-1] - hi) <= 1e-9:
        points[-1] = hi
    else:
        points.append(hi)
    return points


def parse_bounds(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise CliUsageError(f"bad bounds {text!r}; expected lo:hi") from None
    return lo, hi


# --- serialisation -------------------------------------------------------------


def fmt_value(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.9g}"


def fmt_param(v: float) -> str:
    return repr(float(f"{v:.9g}"))


def _round9(v: float) -> float:
    return float(f"{v:.9g}")


def to_jsonable(obj: Any) -> Any:
    """Round floats to 9 significant digits; infinite values become null and
    mark their enclosing object with ``"unbounded": true``."""
    if isinstance(obj, dict):
        out: dict[str, Any] = {}
        unbounded = False
        for k, v in obj.items():
            if isinstance(v, float) and math.isinf(v):
                out[k] = None
                unbounded = True
            else:
                out[k] = to_jsonable(v)
        if unbounded:
            out["unbounded"] = True
        return out
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isinf(obj):
            return None
        return _round9(obj)
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    seconds = int(epoch) if epoch and epoch.isdigit() else 0
    return datetime.fromtimestamp(seconds, timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def manifest(command: str, parameters: dict, seed: Optional[int]) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "rng": verify.RNG_ALGORITHM,
        "tool_version": __version__,
        "timestamp": timestamp(),
    }


def write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_table(path, fmt, header, rows, meta) -> None:
    """CSV (with a ``.manifest.json`` sidecar when written to a file) or JSON."""
    if fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        write_text(path, dump_json({"manifest": meta, "rows": records}))
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_value(v) if isinstance(v, float) else v for v in row])
    write_text(path, buf.getvalue())
    if path not in (None, "-"):
        write_text(path + ".manifest.json", dump_json(meta))


# --- commands ------------------------------------------------------------------


def cmd_frontier(args) -> int:
    mechs = args.mech or ["bim"]
    rows = []
    for name in mechs:
        if name in ALPHA_MECHS:
            grid_text, fn = args.alpha, ALPHA_MECHS[name]
        else:
            grid_text, fn = args.c, BIAS_MECHS[name]
        if grid_text is None:
            flag = "--alpha" if name in ALPHA_MECHS else "--c"
            raise CliUsageError(f"{name} needs {flag}")
        for v in parse_grid(grid_text):
            try:
                g = fn(v)
            except analysis.RangeError as exc:
                raise CliUsageError(f"{name}: {exc}") from None
            rows.append([name, fmt_param(v), g.consistency, g.robustness])
    if args.format == "json":
        rows = [[m, float(p), c, r] for m, p, c, r in rows]
    meta = manifest(
        "frontier", {"mech": mechs, "alpha": args.alpha, "c": args.c, "format": args.format}, None
    )
    write_table(args.output, args.format, ["mechanism", "param", "consistency", "robustness"], rows, meta)
    return EXIT_OK


def _search_config(args) -> verify.SearchConfig:
    try:
        return verify.SearchConfig(tolerance=args.tolerance)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None


def cmd_curve(args) -> int:
    try:
        curve = analysis.bim_error_curve(args.alpha)
    except analysis.RangeError as exc:
        raise CliUsageError(str(exc)) from None
    etas = parse_grid(args.eta)
    if any(e < 0 for e in etas):
        raise CliUsageError("eta must be non-negative")
    header = ["eta", "closed_form"]
    rows = [[float(e), curve(e)] for e in etas]
    if args.empirical:
        header.append("empirical")
        measured = verify.empirical_error_curve(args.alpha, etas, _search_config(args))
        for row, (_, value) in zip(rows, measured):
            row.append(value)
    meta = manifest(
        "curve",
        {"alpha": args.alpha, "eta": args.eta, "empirical": args.empirical, "format": args.format},
        None,
    )
    write_table(args.output, args.format, header, rows, meta)
    return EXIT_OK


def cmd_optimize_lrm(args) -> int:
    alpha_bounds = parse_bounds(args.alpha_bounds)
    p_bounds = parse_bounds(args.p_bounds)
    try:
        res = verify.optimize_lrm(verify.SearchConfig(), alpha_bounds, p_bounds)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None
    out = {
        "alpha_star": res.alpha,
        "p_star": res.p,
        "ratio": res.ratio,
        "min_sampled": res.min_sampled,
        "warning": None
        if res.beats_constant_half
        else "no parameters in range beat the constant-1/2 ratio of 2",
        "trace": [{"level": l, "alpha": a, "p": p, "ratio": r} for l, a, p, r in res.trace],
        "manifest": manifest(
            "optimize-lrm", {"alpha_bounds": args.alpha_bounds, "p_bounds": args.p_bounds}, None
        ),
    }
    if out["warning"]:
        print(f"warning: {out['warning']}", file=sys.stderr)
    write_text(args.output, dump_json(out))
    return EXIT_OK


def _pair(g: GuaranteePair) -> dict:
    return {"consistency": g.consistency, "robustness": g.robustness}


def _witness(w: verify.Witness) -> dict:
    return {"profile": list(w.profile.positions), "prediction": w.prediction, "value": w.value}


def suite_guarantees(cfg, seed, trials) -> list[dict]:
    return [
        {
            "check": "guarantees",
            "mechanism": r.label,
            "bound": r.bound,
            "empirical": _pair(r.empirical),
            "closed_form": _pair(r.closed_form),
            "witnesses": [_witness(w) for w in r.witnesses],
            "pass": r.passed,
        }
        for r in verify.verify_all(cfg)
    ]


SP_MECHANISMS = (
    MechanismSpec(Kind.CONSTANT_HALF),
    MechanismSpec(Kind.ALPHA_BIM, alpha=1.5),
    MechanismSpec.lrm_optimal(),
    MechanismSpec(Kind.BAM),
    MechanismSpec(Kind.ALPHA_BI_RANDOMIZED, alpha=1.5),
    MechanismSpec(Kind.BIAS_AWARE_LRM),
)


def _violation(v: Optional[verify.SPViolation]) -> Optional[dict]:
    if v is None:
        return None
    return {
        "profile": list(v.profile.positions),
        "agent": v.agent,
        "misreport": v.misreport,
        "prediction": v.prediction,
        "gain": v.gain,
    }


def suite_sp(cfg, seed, trials) -> list[dict]:
    reports = []
    for spec in SP_MECHANISMS:
        res = verify.strategyproofness_test(spec, trials, seed)
        reports.append(
            {
                "check": "strategyproofness",
                "mechanism": str(spec),
                "trials": res.trials,
                "counterexample": _violation(res.counterexample),
                "pass": res.passed,
            }
        )
    for name, mech in verify.NEGATIVE_CONTROLS.items():
        res = verify.strategyproofness_test(mech, trials, seed)
        reports.append(
            {
                "check": "strategyproofness-negative-control",
                "mechanism": name,
                "trials": res.trials,
                "counterexample": _violation(res.counterexample),
                "pass": not res.passed,
            }
        )
    return reports


def suite_reduction(cfg, seed, trials) -> list[dict]:
    res = verify.reduction_property_test(trials, seed)
    return [
        {
            "check": "two-agent-reduction",
            "trials": res.trials,
            "worst_gap": res.detail.get("worst_gap", res.detail.get("gap")),
            "pass": res.passed,
        }
    ]


def suite_dominance(cfg, seed, trials) -> list[dict]:
    bim_grid = [0.25 + k * 1e-3 for k in range(250)]
    balrm_grid = [k * 1e-3 for k in range(501)]
    bim = verify.dominance_check(bim_grid)
    balrm = verify.balrm_dominance_check(balrm_grid)
    return [
        {"check": "bam-over-bim", "grid_points": bim.trials, "counterexample": bim.counterexample, "pass": bim.passed},
        {"check": "bam-over-balrm", "grid_points": balrm.trials, "counterexample": balrm.counterexample, "pass": balrm.passed},
    ]


def suite_lowerbound(cfg, seed, trials) -> list[dict]:
    delta, bound = analysis.lower_bound_certificate()
    coeff = analysis.lower_bound_p2_coefficient(delta)
    ok = abs(delta - 617 / 4300) <= 1e-9 and abs(bound - 1.12579) <= 1e-5 and abs(coeff) <= 1e-12
    return [
        {
            "check": "lower-bound-certificate",
            "delta": delta,
            "bound": bound,
            "p2_coefficient": coeff,
            "pass": ok,
        }
    ]


SUITE_RUNNERS = {
    "guarantees": suite_guarantees,
    "sp": suite_sp,
    "reduction": suite_reduction,
    "dominance": suite_dominance,
    "lowerbound": suite_lowerbound,
}


def cmd_verify(args) -> int:
    cfg = _search_config(args)
    if args.trials < 1:
        raise CliUsageError("--trials must be positive")
    names = list(SUITE_RUNNERS) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        for rep in SUITE_RUNNERS[name](cfg, args.seed, args.trials):
            reports.append({"suite": name, **rep})
    out = {
        "suite": args.suite,
        "pass": all(r["pass"] for r in reports),
        "reports": reports,
        "manifest": manifest(
            "verify",
            {"suite": args.suite, "tolerance": args.tolerance, "trials": args.trials},
            args.seed,
        ),
    }
    write_text(args.output, dump_json(out))
    return EXIT_OK if out["pass"] else EXIT_FAIL


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="envyline", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"envyline {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frontier", help="closed-form (consistency, robustness) rows")
    p.add_argument("--mech", action="append", choices=sorted({**ALPHA_MECHS, **BIAS_MECHS}))
    p.add_argument("--alpha", help="alpha grid lo:hi:step for bim/birm")
    p.add_argument("--c", help="bias grid lo:hi:step for bam/balrm")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("curve", help="alpha-BIM ratio against the prediction error bound")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eta", default="0:0.6:0.025", help="eta grid lo:hi:step")
    p.add_argument("--empirical", action="store_true", help="add a brute-force column")
    p.add_argument("--tolerance", type=float, default=verify.SearchConfig().tolerance)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("optimize-lrm", help="tune the LRM lottery parameters")
    p.add_argument("--alpha-bounds", default="0:0.25")
    p.add_argument("--p-bounds", default="0:0.5")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_optimize_lrm)

    p = sub.add_parser("verify", help="run verification suites and emit a JSON report")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=verify.SearchConfig().tolerance)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"envyline: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"envyline: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
