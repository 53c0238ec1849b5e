"""Command-line front end.

Subcommands: dist (conditional probabilities/pmfs), limits (limit trajectory
for a given sequence), monitor (streaming chart), simulate (ARL Monte Carlo),
sweep (cutoff sweep), verify (oracle cross-check).  Exit codes: 0 success,
1 verification mismatch, 2 monitor signalled, 64 usage error, 65 bad input data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .chart import ChartConfig, Monitor
from .engine import SurvivalComputer, statistic_pmf, survival_probability
from .errors import DataInputError, ParameterError
from .families import family_for
from .simulate import (
    Distribution,
    ScenarioSpec,
    estimate_arl,
    exponential,
    geometric_check,
    normal,
    student_t,
    sweep_threshold,
    uniform,
)
from .verify import run_verification

EX_OK = 0
EX_MISMATCH = 1
EX_SIGNAL = 2
EX_USAGE = 64
EX_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _env_seed():
    raw = os.environ.get("RUNCHART_SEED")
    return int(raw) if raw else None


def _add_chart_flags(p):
    p.add_argument("--rule", choices=["longest-run", "scan"], default="longest-run")
    p.add_argument("--window", "-r", type=int, default=None, help="scan window size")
    p.add_argument("--alpha", default=None, help="target conditional signal level")
    p.add_argument("--c", type=float, default=None, help="binarization cutoff")
    p.add_argument("--mu-hint", type=float, default=None,
                   help="anticipated shift; sets c = mu - 1 when --c is absent")
    p.add_argument("--startup", type=int, default=None, help="first monitored index")
    p.add_argument("--no-randomize", action="store_true",
                   help="conservative chart without boundary randomization")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=["float", "exact"], default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="runchart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parser_class=_Parser,
                       help="conditional probability or pmf of a runs statistic")
    p.add_argument("--rule", choices=["longest-run", "scan"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, default=None, help="longest-run threshold")
    p.add_argument("--s", type=int, default=None, help="scan count threshold")
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--window", "-r", type=int, default=None)
    p.add_argument("--pmf", action="store_true", help="emit the full pmf")
    p.add_argument("--dump-patterns", action="store_true")
    p.add_argument("--mode", choices=["auto", "float", "exact"], default="auto")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("limits", parser_class=_Parser,
                       help="limit trajectory for a given sequence")
    _add_chart_flags(p)
    p.add_argument("--bits", default=None, help="direct 0/1 string, skips binarization")
    p.add_argument("source", nargs="?", default="-", help="observations file or - for stdin")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("monitor", parser_class=_Parser,
                       help="stream observations through a chart")
    _add_chart_flags(p)
    p.add_argument("source", nargs="?", default="-", help="observations file or - for stdin")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    for name in ("simulate", "sweep"):
        p = sub.add_parser(name, parser_class=_Parser,
                           help="Monte Carlo ARL estimation" if name == "simulate"
                           else "ARL per binarization cutoff")
        _add_chart_flags(p)
        p.add_argument("--config", default=None, help="JSON file with defaults")
        p.add_argument("--dist", choices=["normal", "student-t", "exponential", "uniform"],
                       default=None, help="in-control generator family")
        p.add_argument("--df", type=float, default=None, help="student-t degrees of freedom")
        p.add_argument("--rate", type=float, default=None, help="exponential rate")
        p.add_argument("--lo", type=float, default=None)
        p.add_argument("--hi", type=float, default=None)
        p.add_argument("--mu", type=float, default=None,
                       help="location shift of the out-of-control generator")
        p.add_argument("--tau", type=int, default=None)
        p.add_argument("--warmup", type=int, default=None,
                       help="in-control historical observations prepended")
        p.add_argument("--horizon", type=int, default=None)
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        if name == "sweep":
            p.add_argument("--c-values", required=True,
                           help="comma-separated cutoffs, e.g. 0,0.5,1,1.5")

    p = sub.add_parser("verify", parser_class=_Parser,
                       help="cross-check the engine against exhaustive enumeration")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--max-run", type=int, default=6)
    p.add_argument("--max-window", type=int, default=5)
    p.add_argument("--joint-max-n", type=int, default=8)
    return parser


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(obj.keys())
        writer.writerow(obj.values())
        sys.stdout.write(out.getvalue())
    else:
        print(json.dumps(obj))


def _probability_fields(p) -> dict:
    if isinstance(p, Fraction):
        return {"probability": float(p), "exact": f"{p.numerator}/{p.denominator}"}
    return {"probability": p}


def _cmd_dist(args) -> int:
    family = family_for(args.rule, args.window)
    threshold = args.threshold if args.threshold is not None else (
        args.d if args.d is not None else args.s
    )
    out = {"n": args.n, "m": args.m, **family.describe()}
    if args.dump_patterns:
        if threshold is None:
            raise ParameterError("--dump-patterns needs a threshold (--d/--s)")
        out["compound_pattern"] = family.threshold_pattern(threshold).to_json_dict()
    if args.pmf:
        pmf = statistic_pmf(args.n, args.m, family, mode=args.mode)
        out["pmf"] = {
            str(v): _probability_fields(p) for v, p in pmf.items()
        }
    elif threshold is not None:
        p = survival_probability(args.n, args.m, family.threshold_pattern(threshold),
                                 mode=args.mode)
        out["threshold"] = threshold
        out.update(_probability_fields(p))
    elif not args.dump_patterns:
        raise ParameterError("dist needs --d/--s/--threshold or --pmf")
    _emit(out, args.format)
    return EX_OK


def _chart_config(args, file_cfg=None) -> ChartConfig:
    cfg = dict(file_cfg or {})

    def pick(flag, key, default):
        return flag if flag is not None else cfg.get(key, default)

    c = args.c
    if c is None and args.mu_hint is not None:
        c = args.mu_hint - 1.0  # slightly below the anticipated shift
    c = c if c is not None else cfg.get("c", 0.0)
    randomize = not args.no_randomize if args.no_randomize else cfg.get("randomize", True)
    return ChartConfig(
        rule=pick(args.rule if args.rule != "longest-run" else None, "rule", "longest-run"),
        alpha=pick(args.alpha, "alpha", 0.005),
        threshold_c=float(c),
        window=pick(args.window, "window", None),
        startup_nu=int(pick(args.startup, "startup", 10)),
        randomize=randomize,
        seed=pick(args.seed, "seed", _env_seed()),
        mode=pick(args.mode, "mode", "float"),
    )


def _observations(source: str):
    """Yield floats, one per line; tolerates a header row and t,value pairs."""
    stream = sys.stdin if source == "-" else open(source)
    try:
        first = True
        for lineno, raw in enumerate(stream, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            value = text.split(",")[-1].strip()
            try:
                y = float(value)
            except ValueError:
                if first:
                    first = False  # header row
                    continue
                raise DataInputError(f"line {lineno}: not a number: {value!r}", line=lineno)
            first = False
            yield y
    finally:
        if stream is not sys.stdin:
            stream.close()


def _step_row(rec) -> dict:
    return rec.to_json_dict()


def _cmd_monitor(args, trajectory_only: bool = False) -> int:
    config = _chart_config(args)
    monitor = Monitor(config)
    fmt = args.format
    writer = None
    if fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["t", "y", "bit", "count", "stat", "limit", "nu", "signal"])

    def emit(rec):
        row = _step_row(rec)
        if writer is not None:
            writer.writerow(row.values())
        else:
            print(json.dumps(row), flush=not trajectory_only)

    signalled = False
    if trajectory_only and args.bits is not None:
        if set(args.bits) - {"0", "1"}:
            raise DataInputError(f"--bits must be a 0/1 string, got {args.bits!r}")
        for b in args.bits:
            rec = monitor.update_bit(int(b))
            emit(rec)
            if rec.signal:
                signalled = True
                break
    else:
        for y in _observations(args.source):
            rec = monitor.update(y)
            emit(rec)
            if rec.signal:
                signalled = True
                break
    if writer is None:
        print(json.dumps(monitor.record().to_json_dict()))
    return EX_SIGNAL if (signalled and not trajectory_only) else EX_OK


def _scenario(args, config: ChartConfig, file_cfg=None) -> ScenarioSpec:
    cfg = dict(file_cfg or {})

    def pick(flag, key, default):
        return flag if flag is not None else cfg.get(key, default)

    kind = pick(args.dist, "dist", "normal")
    if kind == "normal":
        dist0 = normal(0.0, 1.0)
    elif kind == "student-t":
        dist0 = student_t(pick(args.df, "df", 3.0))
    elif kind == "exponential":
        dist0 = exponential(pick(args.rate, "rate", 1.0))
    else:
        dist0 = uniform(pick(args.lo, "lo", 0.0), pick(args.hi, "hi", 1.0))
    mu = pick(args.mu, "mu", None)
    dist1 = dist0.shifted(mu) if mu else dist0
    return ScenarioSpec(
        dist0=dist0,
        dist1=dist1,
        tau=int(pick(args.tau, "tau", 1)),
        horizon=int(pick(args.horizon, "horizon", 10_000)),
        reps=int(pick(args.reps, "reps", 1000)),
        seed=int(pick(args.seed, "seed", _env_seed() or 0)),
        warmup=int(pick(args.warmup, "warmup", 0)),
    )


def _load_config_file(path):
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _arl_row(config: ChartConfig, scenario: ScenarioSpec, est, c=None) -> dict:
    row = {
        "rule": config.rule,
        "alpha": str(config.alpha),
        "c": config.threshold_c if c is None else c,
        "dist": scenario.dist1.kind,
        "tau": scenario.tau,
        "warmup": scenario.warmup,
        "reps": est.reps,
        "arl": est.mean,
        "std_error": est.std_error,
        "censored": est.censored_count,
    }
    return row


def _cmd_simulate(args) -> int:
    file_cfg = _load_config_file(args.config)
    config = _chart_config(args, file_cfg)
    scenario = _scenario(args, config, file_cfg)
    est = estimate_arl(scenario, config)
    _emit(_arl_row(config, scenario, est), args.format)
    return EX_OK


def _cmd_sweep(args) -> int:
    file_cfg = _load_config_file(args.config)
    config = _chart_config(args, file_cfg)
    scenario = _scenario(args, config, file_cfg)
    try:
        c_values = [float(v) for v in args.c_values.split(",") if v.strip()]
    except ValueError:
        raise DataInputError(f"bad --c-values: {args.c_values!r}")
    rows = [
        _arl_row(config, scenario, est, c=c)
        for c, est in sweep_threshold(scenario, config, c_values)
    ]
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=rows[0].keys())
        writer.writeheader()
        writer.writerows(rows)
    else:
        for row in rows:
            print(json.dumps(row))
    return EX_OK


def _cmd_verify(args) -> int:
    lines, ok = run_verification(max_n=args.max_n, max_run=args.max_run,
                                 max_window=args.max_window,
                                 joint_max_n=args.joint_max_n)
    for line in lines:
        print(line)
    return EX_OK if ok else EX_MISMATCH


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "dist":
            return _cmd_dist(args)
        if args.command == "limits":
            return _cmd_monitor(args, trajectory_only=True)
        if args.command == "monitor":
            return _cmd_monitor(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise AssertionError(args.command)
    except ParameterError as exc:
        print(f"runchart: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except DataInputError as exc:
        print(f"runchart: bad input: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
