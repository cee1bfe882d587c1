"""Command line front end: ``tautline {denoise,sweep,verify,generate}``."""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import analysis
from .errors import ConfigurationError, TautlineError, ValidationError
from .signal import PiecewiseConstantSignal, SIGNAL_NAMES, dumps_csv, generate, read_csv
from .taut import Tube, contact_sets, contact_tolerance, derivative, solve

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

log = logging.getLogger("tautline")


class UsageError(Exception):
    pass


def _configure_logging():
    level = os.environ.get("TAUTLINE_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _parse_param(text):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        parsed = int(value)
    except ValueError:
        try:
            parsed = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {key} needs a number, got {value!r}") from None
    return key, parsed


def parse_alpha_range(text: str) -> list[float]:
    """Expand ``lo:hi:count[:log|lin]`` into a list of radii."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"--alpha-range expects lo:hi:count[:log|lin], got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad --alpha-range {text!r}") from None
    spacing = parts[3] if len(parts) == 4 else "log"
    if spacing not in ("log", "lin"):
        raise UsageError(f"--alpha-range spacing must be log or lin, got {spacing!r}")
    if count < 1 or not (0 < lo <= hi) or (count > 1 and lo == hi):
        raise UsageError(f"--alpha-range needs 0 < lo < hi and count >= 1, got {text!r}")
    if count == 1:
        return [lo]
    grid = np.geomspace(lo, hi, count) if spacing == "log" else np.linspace(lo, hi, count)
    return grid.tolist()


def _alphas(args) -> list[float] | None:
    given = [a for a in (args.alpha, args.alphas, args.alpha_range) if a is not None]
    if len(given) > 1:
        raise UsageError("use only one of --alpha, --alphas, --alpha-range")
    if args.alpha is not None:
        out = [args.alpha]
    elif args.alphas is not None:
        try:
            out = [float(a) for a in args.alphas.split(",") if a.strip()]
        except ValueError:
            raise UsageError(f"bad --alphas {args.alphas!r}") from None
    elif args.alpha_range is not None:
        out = parse_alpha_range(args.alpha_range)
    else:
        return None
    if not out or any(not (np.isfinite(a) and a > 0) for a in out):
        raise UsageError("alphas must be positive and finite")
    return out


def _load_signal(args) -> tuple[PiecewiseConstantSignal, dict]:
    if (args.signal is None) == (getattr(args, "input", None) is None):
        raise UsageError("give exactly one of --signal or --input")
    if args.signal is not None:
        params = dict(args.param or [])
        if args.n is not None:
            params["n"] = args.n
        if args.seed is not None:
            params["seed"] = args.seed
        try:
            sig = generate(args.signal, **params)
        except ConfigurationError as exc:
            raise UsageError(str(exc)) from None
        return sig, {"signal": args.signal, "params": params}
    return read_csv(args.input), {"input": args.input}


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _strict(obj):
    # JSON has no inf/nan literals; spell them as strings
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _strict(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strict(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_strict(obj), indent=2, allow_nan=False) + "\n"


def _csv_table(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(repr(float(v)) if not isinstance(v, str) else v for v in row) + "\n")
    return buf.getvalue()


def _step_rows(u: PiecewiseConstantSignal):
    return [(u.breakpoints[i], u.breakpoints[i + 1], u.values[i]) for i in range(u.n)]


def _solve_record(f, alpha, eps, tau):
    tube = Tube.around(f, alpha)
    sol = solve(tube)
    u = derivative(sol)
    cs = contact_sets(sol, tube, eps)
    s = analysis.Solved(alpha, tube, sol, u, cs, analysis.jump_set_of(u, tau))
    return {
        "alpha": alpha,
        "u": [{"left": float(a), "right": float(b), "value": float(v)} for a, b, v in _step_rows(u)],
        "taut": sol.to_dict(cs),
        "transitions": list(cs.transitions),
        "jumps": s.jumps.to_dict(),
        "plateaus": analysis.plateau_summary(s),
    }


def _sweep_job(item):
    f, alpha, eps, tau = item
    return _solve_record(f, alpha, eps, tau)


def _resolved_tolerances(args, f, alphas):
    tau = args.tol_jump if args.tol_jump is not None else analysis.jump_threshold(f)
    eps = {repr(a): (args.tol_contact if args.tol_contact is not None else contact_tolerance(a)) for a in alphas}
    return tau, eps


def cmd_denoise(args) -> int:
    f, source = _load_signal(args)
    alphas = _alphas(args)
    if not alphas or len(alphas) != 1:
        raise UsageError("denoise needs exactly one radius (--alpha)")
    alpha = alphas[0]
    tau, eps = _resolved_tolerances(args, f, alphas)
    config = {"command": "denoise", **source, "alpha": alpha, "tol_contact": eps[repr(alpha)], "tol_jump": tau}
    rec = _solve_record(f, alpha, eps[repr(alpha)], tau)
    if args.format == "json":
        _emit(_dump_json({"config": config, **rec}), args.output)
        return EXIT_OK
    parts = [f"# config: {json.dumps(config)}\n", "# section: u\n"]
    parts.append(_csv_table(("left", "right", "value"), [(p["left"], p["right"], p["value"]) for p in rec["u"]]))
    parts.append("# section: free\n")
    parts.append(_csv_table(("left", "right", "value"), [(p["left"], p["right"], p["value"]) for p in rec["plateaus"]]))
    parts.append("# section: taut\n")
    parts.append(_csv_table(("knot", "value"), zip(rec["taut"]["knots"], rec["taut"]["values"])))
    parts.append("# section: contacts\n")
    rows = [("plus", l, r) for l, r in rec["taut"]["contacts"]["plus"]]
    rows += [("minus", l, r) for l, r in rec["taut"]["contacts"]["minus"]]
    rows.sort(key=lambda t: t[1])
    parts.append(_csv_table(("wall", "left", "right"), rows))
    _emit("".join(parts), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    f, source = _load_signal(args)
    alphas = _alphas(args)
    if alphas is None:
        alphas = analysis.default_alphas(f)
    alphas = sorted(set(alphas))
    tau, eps = _resolved_tolerances(args, f, alphas)
    config = {"command": "sweep", **source, "alphas": alphas, "tol_contact": eps, "tol_jump": tau, "jobs": args.jobs}
    items = [(f, a, eps[repr(a)], tau) for a in alphas]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_sweep_job, items))
    else:
        records = [_sweep_job(it) for it in items]
    if args.format == "json":
        slim = [{k: r[k] for k in ("alpha", "jumps", "plateaus", "transitions")} for r in records]
        _emit(_dump_json({"config": config, "sweep": slim}), args.output)
        return EXIT_OK
    parts = [f"# config: {json.dumps(config)}\n", "# section: jumps\n"]
    jump_rows = [
        (r["alpha"], e["location"], e["left_value"], e["right_value"], e["amplitude"])
        for r in records
        for e in r["jumps"]["entries"]
    ]
    parts.append(_csv_table(("alpha", "location", "left_value", "right_value", "amplitude"), jump_rows))
    parts.append("# section: plateaus\n")
    plateau_rows = [(r["alpha"], p["left"], p["right"], p["value"]) for r in records for p in r["plateaus"]]
    parts.append(_csv_table(("alpha", "left", "right", "value"), plateau_rows))
    _emit("".join(parts), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    f, source = _load_signal(args)
    alphas = _alphas(args)
    if alphas is None:
        alphas = analysis.default_alphas(f)
    alphas = sorted(set(alphas))
    tau = args.tol_jump if args.tol_jump is not None else analysis.jump_threshold(f)
    config = {
        "command": "verify",
        **source,
        "alphas": alphas,
        "tol_contact": args.tol_contact if args.tol_contact is not None else "max(1e-12, 1e-9*alpha)",
        "tol_jump": tau,
        "tol_oracle": args.tol_oracle,
    }
    report = analysis.run_suite(
        f, alphas, source.get("signal", source.get("input")), eps=args.tol_contact, tau=args.tol_jump,
        oracle_tol=args.tol_oracle,
    )
    doc = {"config": config, "report": report.to_dict()}
    if args.output is not None:
        _emit(_dump_json(doc), args.output)
    if report.passed:
        if args.output is None:
            _emit(_dump_json(doc), None)
        return EXIT_OK
    failures = [v.to_dict() for v in report.failures()]
    sys.stdout.write(_dump_json({"config": config, "failures": failures}))
    return EXIT_FAILURE


def cmd_generate(args) -> int:
    if getattr(args, "input", None) is not None:
        raise UsageError("generate takes --signal, not --input")
    f, source = _load_signal(args)
    config = {"command": "generate", **source}
    if args.format == "json":
        body = {"config": config, "breakpoints": f.breakpoints.tolist(), "values": f.values.tolist()}
        _emit(_dump_json(body), args.output)
    else:
        _emit(dumps_csv(f, comments=[f"config: {json.dumps(config)}"]), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tautline", description="1D total-variation denoising via the taut string.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        src = p.add_argument_group("input")
        src.add_argument("--signal", help=f"named generator: {', '.join(SIGNAL_NAMES)} (aliases fig1, staircase, random)")
        if with_input:
            src.add_argument("--input", help="signal CSV (header breakpoint,value)")
        src.add_argument("--n", type=int, help="cell count (random_piecewise: plateau count)")
        src.add_argument("--seed", type=int, help="seed for random_piecewise")
        src.add_argument("--param", action="append", type=_parse_param, metavar="KEY=VALUE",
                         help="extra generator parameter, e.g. N=6, c=0.3, eps=1e-3")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def radii(p):
        g = p.add_argument_group("regularization")
        g.add_argument("--alpha", type=float)
        g.add_argument("--alphas", help="comma separated list")
        g.add_argument("--alpha-range", help="lo:hi:count[:log|lin], log spacing by default")
        g.add_argument("--tol-contact", type=float, help="contact band (default max(1e-12, 1e-9*alpha))")
        g.add_argument("--tol-jump", type=float, help="jump threshold (default 1e-8*max(1, |f|_inf))")

    p = sub.add_parser("denoise", help="solve for one alpha")
    common(p)
    radii(p)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sweep", help="jump reports and plateau tables across alphas")
    common(p)
    radii(p)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the property checks and write a JSON report")
    common(p)
    radii(p)
    p.add_argument("--tol-oracle", type=float, default=analysis.DUAL_TOL, help="dual oracle tolerance")
    p.set_defaults(func=cmd_verify, format="json")

    p = sub.add_parser("generate", help="write a named signal as CSV")
    common(p, with_input=False)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TautlineError, ValidationError) as exc:
        log.error("%s", exc)
        sys.stdout.write(_dump_json({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
