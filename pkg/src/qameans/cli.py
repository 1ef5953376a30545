"""Command-line front end: eval, classify, compare, envelope, verify.

Every report is machine-readable (JSON by default, CSV for envelope grid
tables) and opens with a config block stating the effective interval,
grid resolution, seed, and trial count, so any run can be reproduced from
its own output.  Numbers are printed in shortest round-trip form.  Exit
codes: 0 success or pass, 1 a check failed with a witness (including an
envelope that does not exist), 2 usage or domain errors.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

from .convexity import classify
from .envelope import qa_concave_envelope, qa_convex_envelope
from .errors import QameansError, UsageError
from .generators import parse_generator
from .grids import DEFAULT_GRID_POINTS, WorkingInterval
from .means import compare, parse_mean, qa_mean
from .verify import (
    duality_check,
    ingham_jessen_sweep,
    kedlaya_check,
    maximality_check,
    symmetry_check,
)

DEFAULT_LO = 0.1
DEFAULT_HI = 10.0
DEFAULT_TRIALS = 10_000


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gen", required=True,
                        help="generator spec: power:<p> | log | exp | id | "
                             "affine:<a>:<b> | table:<path>")
    common.add_argument("--lo", type=float, default=DEFAULT_LO,
                        help=f"interval lower end (default {DEFAULT_LO}); "
                             "ignored for table: specs, which carry their grid")
    common.add_argument("--hi", type=float, default=DEFAULT_HI,
                        help=f"interval upper end (default {DEFAULT_HI})")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS,
                        help=f"grid points (default {DEFAULT_GRID_POINTS})")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: QAM_SEED env var, else 0)")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help=f"sampling trials (default {DEFAULT_TRIALS})")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format; csv only for envelope grid tables")
    common.add_argument("--out", default=None, help="write the report to a file")

    parser = argparse.ArgumentParser(
        prog="qameans",
        description="Quasiarithmetic means: evaluation, convexity "
                    "classification, and convex/concave envelopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common],
                            help="evaluate the QA mean of a vector")
    p_eval.add_argument("--vec", default=None,
                        help="comma-separated values, e.g. 1,7")
    p_eval.add_argument("--vec-file", default=None,
                        help="CSV file, one tuple per row")

    sub.add_parser("classify", parents=[common],
                   help="convexity class of the QA mean")

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="order two QA means by the generator criterion")
    p_cmp.add_argument("--gen2", required=True, help="second generator spec")

    p_env = sub.add_parser("envelope", parents=[common],
                           help="convex or concave QA envelope")
    p_env.add_argument("--kind", choices=("convex", "concave"), default="convex")

    p_ver = sub.add_parser("verify", parents=[common],
                           help="randomized inequality checks")
    p_ver.add_argument("--check", required=True,
                       choices=("ij", "kedlaya", "maximality", "duality",
                                "symmetry"))
    p_ver.add_argument("--gen2", default="arith",
                       help="second mean for ij/kedlaya: a generator spec or "
                            "'arith' (default arith)")
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get("QAM_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QAM_SEED must be an integer, got {raw!r}") from None


def _config(args, seed: int, **extras) -> dict:
    cfg = {"command": args.command, "gen": args.gen, "lo": args.lo,
           "hi": args.hi, "grid_points": args.grid, "seed": seed,
           "trials": args.trials}
    cfg.update(extras)
    return cfg


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(report: dict, out_path: str | None) -> None:
    _emit(json.dumps(report, indent=2) + "\n", out_path)


def _parse_vec(text: str) -> list:
    try:
        return [float(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"--vec must be comma-separated reals, got {text!r}") from None


def _cmd_eval(args, seed: int) -> int:
    if (args.vec is None) == (args.vec_file is None):
        raise UsageError("eval needs exactly one of --vec or --vec-file")
    interval = WorkingInterval(args.lo, args.hi, args.grid)
    gen = parse_generator(args.gen, interval)
    report = _config(args, seed)
    if args.vec is not None:
        report = {"config": report, "value": qa_mean(gen, _parse_vec(args.vec))}
    else:
        with open(args.vec_file) as fh:
            rows = [_parse_vec(line) for line in fh
                    if line.strip() and not line.lstrip().startswith("#")]
        report = {"config": report,
                  "values": [qa_mean(gen, row) for row in rows]}
    _json_report(report, args.out)
    return 0


def _cmd_classify(args, seed: int) -> int:
    interval = WorkingInterval(args.lo, args.hi, args.grid)
    gen = parse_generator(args.gen, interval)
    verdict = classify(gen)
    _json_report({"config": _config(args, seed), **verdict.to_dict()}, args.out)
    return 0


def _cmd_compare(args, seed: int) -> int:
    interval = WorkingInterval(args.lo, args.hi, args.grid)
    f = parse_generator(args.gen, interval)
    g = parse_generator(args.gen2, interval)
    rep = compare(f, g)
    _json_report({"config": _config(args, seed, gen2=args.gen2),
                  **rep.to_dict()}, args.out)
    return 0


def _envelope_csv(result, config: dict) -> str:
    xs = result.interval.grid()
    cols = [("x", list(xs))]
    if result.rho is not None:
        cols.append(("rho", list(result.rho.values)))
    if result.m is not None:
        cols.append(("m", list(result.m(xs))))
    cols.append(("g", list(result.g.values)))
    cols.append(("g1", list(result.g1.values)))
    buf = io.StringIO()
    buf.write("# " + json.dumps({"config": config, "status": result.status,
                                 "direction": result.direction}) + "\n")
    buf.write(",".join(name for name, _ in cols) + "\n")
    for k in range(len(xs)):
        buf.write(",".join(repr(float(vals[k])) for _, vals in cols) + "\n")
    return buf.getvalue()


def _cmd_envelope(args, seed: int) -> int:
    interval = WorkingInterval(args.lo, args.hi, args.grid)
    gen = parse_generator(args.gen, interval)
    fn = qa_convex_envelope if args.kind == "convex" else qa_concave_envelope
    result = fn(gen, gate_trials=args.trials, seed=seed)
    failed = result.status in ("NoneExists", "NonsmoothCase")
    if args.format == "csv" and not failed:
        _emit(_envelope_csv(result, _config(args, seed, kind=args.kind)), args.out)
    else:
        report = {"config": _config(args, seed, kind=args.kind)}
        report.update(result.to_dict(include_grids=(args.format == "json")))
        _json_report(report, args.out)
    return 1 if failed else 0


def _cmd_verify(args, seed: int) -> int:
    interval = WorkingInterval(args.lo, args.hi, args.grid)
    if args.check in ("ij", "kedlaya"):
        M = parse_mean(args.gen, interval)
        N = parse_mean(args.gen2, interval)
        if args.check == "ij":
            rep = ingham_jessen_sweep(M, N, args.trials, seed)
        else:
            rep = kedlaya_check(M, N, 5, args.trials, seed)
    elif args.check == "maximality":
        gen = parse_generator(args.gen, interval)
        env = qa_convex_envelope(gen, seed=seed)
        if env.status not in ("Envelope", "AlreadyExtremal"):
            report = {"config": _config(args, seed, check=args.check),
                      "check": "maximality",
                      "error": f"no convex envelope: status {env.status}",
                      "diagnostics": env.diagnostics}
            _json_report(report, args.out)
            return 1
        candidates = max(1, min(100, args.trials // 100))
        rep = maximality_check(gen, env, candidates,
                               max(1, args.trials // candidates), seed)
    elif args.check == "duality":
        gen = parse_generator(args.gen, interval)
        rep = duality_check(gen, args.trials, seed)
    else:
        mean = parse_mean(args.gen, interval)
        rep = symmetry_check(mean, args.trials, seed)
    report = {"config": _config(args, seed, check=args.check, gen2=args.gen2
                                if args.check in ("ij", "kedlaya") else None)}
    report.update(rep.to_dict())
    _json_report(report, args.out)
    return 0 if rep.passed else 1


def run(argv) -> int:
    """Parse argv, run the command, return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        seed = _resolve_seed(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if args.format == "csv" and args.command != "envelope":
        sys.stderr.write("error: --format csv is only available for envelope "
                         "grid tables\n")
        return 2
    handlers = {
        "eval": _cmd_eval,
        "classify": _cmd_classify,
        "compare": _cmd_compare,
        "envelope": _cmd_envelope,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args, seed)
    except QameansError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
