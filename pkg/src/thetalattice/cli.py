"""Command-line interface.

Exit codes: 0 success, 1 domain or numerical error, 2 usage error,
3 I/O error, 4 at least one bound check failed.
"""

import argparse
import configparser
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields, replace

import numpy as np

from . import bounds
from .energy import difference_energy
from .errors import ConvergenceError, DomainError, EvaluationError, ReductionError, ThresholdAmbiguityError
from .minimize import LineSearchConfig, minimize_2d
from .modular import reduce
from .phases import Phase, classify_phase, find_bc1
from .points import EnergyParams, UpperHalfPoint
from .theta import DEFAULT_POLICY, TruncationPolicy

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_IO, EXIT_CHECKS = 0, 1, 2, 3, 4
SWEEP_COLUMNS = ("alpha", "b", "phase", "y_b", "energy")
_NUMERIC_ERRORS = (DomainError, ConvergenceError, EvaluationError, ReductionError, ThresholdAmbiguityError)


class UsageError(Exception):
    pass


def fmt(v):
    """17 significant digits, lossless for doubles; empty for missing values."""
    if v is None:
        return ""
    return f"{float(v):.17g}"


# --------------------------------------------------------------------------
# config


def load_config(path):
    """Read `key = value` lines into (LineSearchConfig, TruncationPolicy) overrides."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        parser.read_string("[settings]\n" + fh.read())
    raw = dict(parser["settings"])
    cfg_keys = {f.name: f.type for f in fields(LineSearchConfig) if f.name != "y_min"}
    pol_keys = {f.name: f.type for f in fields(TruncationPolicy)}
    cfg, pol = {}, {}
    for key, text in raw.items():
        key = key.replace("-", "_")
        target = cfg if key in cfg_keys else pol if key in pol_keys else None
        if target is None:
            raise UsageError(f"unknown config key {key!r}")
        kind = (cfg_keys | pol_keys)[key]
        try:
            target[key] = int(text) if kind in (int, "int") else float(text)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {text!r}") from exc
    return cfg, pol


def settings(args):
    """Config file defaults, overridden by command-line flags."""
    cfg, pol = ({}, {}) if args.config is None else load_config(args.config)
    if getattr(args, "y_max", None) is not None:
        cfg["y_max"] = args.y_max
    return LineSearchConfig(**cfg), replace(DEFAULT_POLICY, **pol)


# --------------------------------------------------------------------------
# argument parsing helpers


def parse_point(text):
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from exc
    return x, y


def parse_values(text):
    """Comma list or start:stop:step range (stop included up to rounding)."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(n)]
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a list a,b,c or a range start:stop:step, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def parse_grid(text):
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected n or nx,ny, got {text!r}") from exc
    if len(parts) not in (1, 2) or min(parts) < 2:
        raise argparse.ArgumentTypeError("grid sizes must be integers >= 2")
    return parts


def write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# subcommands


def eval_record(alpha, b, x, y, policy, method="auto"):
    ev = difference_energy(EnergyParams(alpha, b), UpperHalfPoint(x, y), policy, method)
    return {"alpha": alpha, "b": b, "x": x, "y": y, "value": ev.value, "est_error": ev.est_error}


def cmd_eval(args):
    _, policy = settings(args)
    if args.replay:
        with open(args.replay) as fh:
            data = json.load(fh)
        records = data if isinstance(data, list) else [data]
        try:
            out = [eval_record(float(r["alpha"]), float(r["b"]), float(r["x"]), float(r["y"]), policy, args.method)
                   for r in records]
        except (KeyError, TypeError) as exc:
            raise UsageError(f"replay records need alpha, b, x, y: {exc}") from exc
        write_text(args.out, json.dumps(out if isinstance(data, list) else out[0], indent=2) + "\n")
        return EXIT_OK
    if args.alpha is None or args.b is None or args.z is None:
        raise UsageError("eval needs --alpha, --b and --z (or --replay)")
    rec = eval_record(args.alpha, args.b, *args.z, policy, args.method)
    if args.format == "json":
        write_text(args.out, json.dumps(rec, indent=2) + "\n")
    else:
        write_text(args.out, f"value = {fmt(rec['value'])}\nest_error = {fmt(rec['est_error'])}\n")
    return EXIT_OK


def cmd_reduce(args):
    r = reduce(complex(*args.z))
    rec = {"x": r.point.x, "y": r.point.y, "word": str(r.word)}
    if args.format == "json":
        write_text(args.out, json.dumps(rec, indent=2) + "\n")
    else:
        write_text(args.out, f"x = {fmt(rec['x'])}\ny = {fmt(rec['y'])}\nword = {rec['word']}\n")
    return EXIT_OK


def cmd_minimize(args):
    cfg, policy = settings(args)
    grid = tuple(args.grid) if args.grid and len(args.grid) == 2 else (11, 30)
    res = minimize_2d(EnergyParams(args.alpha, args.b), cfg, policy, grid=grid)
    rec = {"alpha": args.alpha, "b": args.b, "x": res.argmin.x, "y": res.argmin.y,
           "energy": res.value, "kind": res.kind.value}
    if args.format == "json":
        write_text(args.out, json.dumps(rec, indent=2) + "\n")
    else:
        write_text(args.out, "".join(f"{k} = {v if isinstance(v, str) else fmt(v)}\n" for k, v in rec.items()))
    return EXIT_OK


def cmd_threshold(args):
    cfg, policy = settings(args)
    r = find_bc1(args.alpha, args.tol, cfg, policy)
    rec = {"alpha": r.alpha, "b_c1": r.b_c1, "lo": r.lo, "hi": r.hi, "evaluations": r.evaluations}
    if args.format == "json":
        write_text(args.out, json.dumps(rec, indent=2) + "\n")
    else:
        write_text(args.out, f"b_c1 = {fmt(r.b_c1)}\nbracket = [{fmt(r.lo)}, {fmt(r.hi)}]\n")
    return EXIT_OK


def sweep_cell(alpha, b, cfg, policy):
    """One row of the sweep table."""
    pr = classify_phase(EnergyParams(alpha, b), cfg, policy)
    est = None
    if pr.phase is not Phase.NONEXISTENT:
        est = difference_energy(EnergyParams(alpha, b), UpperHalfPoint(0.5, pr.y_b), policy).est_error
    return {"alpha": alpha, "b": b, "phase": pr.phase.value, "y_b": pr.y_b,
            "energy": pr.energy_at_min, "est_error": est}


def _sweep_cell_star(job):
    return sweep_cell(*job)


def run_sweep(alphas, bs, cfg, policy, jobs=1):
    """Rows for every (alpha, b), sorted by (alpha, b)."""
    cells = sorted({(float(a), float(b)) for a in alphas for b in bs})
    jobs_list = [(a, b, cfg, policy) for a, b in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell_star, jobs_list))
    return [sweep_cell(*j) for j in jobs_list]


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([fmt(r["alpha"]), fmt(r["b"]), r["phase"], fmt(r["y_b"]), fmt(r["energy"])])
    return buf.getvalue()


def cmd_sweep(args):
    cfg, policy = settings(args)
    rows = run_sweep(args.alpha_values, args.b_values, cfg, policy, args.jobs)
    text = json.dumps(rows, indent=2) + "\n" if args.format == "json" else sweep_csv(rows)
    write_text(args.out, text)
    return EXIT_OK


def _suite_names(text):
    if text in ("all", "checks"):
        return bounds.check_names()
    if text == "constants":
        return []
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [n for n in names if n not in bounds.check_names()]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    return names


def cmd_verify(args):
    grid = bounds.GridSpec(n=args.grid[0]) if args.grid else bounds.GridSpec()
    names = _suite_names(args.suite)
    report = bounds.run_suite(names, grid) if names else []
    if args.suite in ("all", "constants"):
        report += bounds.check_constants(grid)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("name", "passed", "margin", "n_points", "n_violations", "lhs_at_worst", "rhs_at_worst"))
        for r in report:
            w.writerow((r.name, r.passed, fmt(r.margin), r.n_points, r.n_violations,
                        fmt(r.lhs_at_worst), fmt(r.rhs_at_worst)))
        text = buf.getvalue()
    else:
        text = json.dumps([r.to_dict() for r in report], indent=2, default=_json_default) + "\n"
    write_text(args.out, text)
    if args.out not in (None, "-"):
        for r in report:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name} margin={r.margin:.3e}")
    return EXIT_OK if all(r.passed for r in report) else EXIT_CHECKS


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


# --------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file with search and truncation defaults")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("text", "csv", "json"), default=None)

    p = argparse.ArgumentParser(prog="thetalattice", description="Two-Gaussian lattice energies on the upper half-plane.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate K(alpha; z) - b K(2 alpha; z)")
    e.add_argument("--alpha", type=float)
    e.add_argument("--b", type=float)
    e.add_argument("--z", type=parse_point, metavar="X,Y")
    e.add_argument("--method", choices=("auto", "expansion", "direct"), default="auto")
    e.add_argument("--replay", metavar="JSON", help="re-evaluate records from an earlier JSON output")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("reduce", parents=[common], help="map z to the fundamental domain")
    r.add_argument("--z", type=parse_point, metavar="X,Y", required=True)
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("minimize", parents=[common], help="global minimizer over the fundamental domain")
    m.add_argument("--alpha", type=float, required=True)
    m.add_argument("--b", type=float, required=True)
    m.add_argument("--y-max", type=float)
    m.add_argument("--grid", type=parse_grid, metavar="NX,NY")
    m.set_defaults(func=cmd_minimize)

    t = sub.add_parser("threshold", parents=[common], help="hexagonal to skinny-rhombic threshold b_c1")
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--tol", type=float, default=1e-4)
    t.add_argument("--y-max", type=float)
    t.set_defaults(func=cmd_threshold)

    s = sub.add_parser("sweep", parents=[common], help="phase table over (alpha, b)")
    s.add_argument("--alpha", dest="alpha_values", type=parse_values, required=True, metavar="LIST|START:STOP:STEP")
    s.add_argument("--b", dest="b_values", type=parse_values, required=True, metavar="LIST|START:STOP:STEP")
    s.add_argument("--y-max", type=float)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", parents=[common], help="run the bound checks and printed constants")
    v.add_argument("--suite", default="all", help="all, checks, constants or a comma list of check names")
    v.add_argument("--grid", type=parse_grid, metavar="N")
    v.set_defaults(func=cmd_verify)
    return p


_DEFAULT_FORMAT = {"sweep": "csv", "verify": "json"}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "text")
    if args.command == "sweep" and args.format == "text":
        args.format = "csv"
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError, configparser.Error) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
