"""Command-line front end.

Exit codes: 0 success, 1 computation or validation failure, 2 usage
error, 3 I/O or parse error. Diagnostics go to stderr as one line.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .copulas import parse_model
from .estimator import bootstrap_ci, empirical_coefficients
from .io import CsvError, CsvSpec, load_csv, write_report, write_sample_csv
from .orthant import beta_IJ, build_orthant_table, coefficients_from_table, strong_concordance_check
from .sampler import sample
from .validation import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _threads(args):
    if args.threads:
        return args.threads
    env = os.environ.get("MEDIALCORR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"MEDIALCORR_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _model(text):
    try:
        return parse_model(text)
    except ValueError as exc:
        raise UsageError(f"bad model {text!r}: {exc}") from None


def _columns(text):
    cols = [c.strip() for c in text.split(",") if c.strip()]
    return [int(c) if c.isdigit() else c for c in cols]


def _subset(text, d):
    try:
        idx = [int(s) - 1 for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"subset must be a comma-separated list of 1-based indices, got {text!r}") from None
    if not idx or any(not 0 <= i < d for i in idx):
        raise UsageError(f"subset {text!r} is empty or out of range for dimension {d}")
    return idx


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_estimate(args):
    if args.bootstrap and args.bootstrap < 100:
        raise UsageError("--bootstrap needs at least 100 replicates")
    if not 0.0 < args.level < 1.0:
        raise UsageError("--level must lie strictly between 0 and 1")
    spec = CsvSpec(args.delimiter, not args.no_header, _columns(args.columns))
    data = load_csv(args.input, spec)
    report = empirical_coefficients(data)
    if args.bootstrap:
        ci = bootstrap_ci(data, args.bootstrap, args.level, args.seed)
        report = replace(report, ci=ci)
    text = write_report(report, format=args.format)
    if args.format == "table" and report.ci is not None:
        ci = report.ci
        text += f"{100 * ci['level']:g}% bootstrap interval for beta: [{ci['beta'][0]:.3f}, {ci['beta'][1]:.3f}]\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_exact(args):
    model = _model(args.model)
    if model.dim < 2:
        raise UsageError("the coefficient needs a model of dimension at least 2")
    table = build_orthant_table(model)
    report = coefficients_from_table(table)
    extra = None
    if args.I or args.J:
        if not (args.I and args.J):
            raise UsageError("--I and --J must be given together")
        I, J = _subset(args.I, model.dim), _subset(args.J, model.dim)
        if set(I) & set(J):
            raise UsageError("--I and --J must be disjoint")
        extra = {"I": [i + 1 for i in I], "J": [j + 1 for j in J], "value": beta_IJ(table, I, J)}
    if args.format == "json":
        obj = report.to_dict()
        if extra:
            obj["beta_IJ"] = extra
        text = json.dumps(obj, indent=2) + "\n"
    else:
        text = write_report(report, format="table")
        if extra:
            text += f"beta_IJ(I={extra['I']}, J={extra['J']}) = {extra['value']:.6f}\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_simulate(args):
    model = _model(args.model)
    if args.n < 1:
        raise UsageError("--n must be positive")
    batch = sample(model, args.n, args.seed, threads=_threads(args))
    write_sample_csv(batch, args.output)
    return EXIT_OK


def cmd_validate(args):
    failed = False
    for res in run_suite(args.suite, wine=args.wine, seed=args.seed):
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail} ({res.seconds:.2f} s)", flush=True)
        if not res.passed:
            print(f"validation failed: {res.name}", file=sys.stderr)
            failed = True
            break
    return EXIT_FAIL if failed else EXIT_OK


def cmd_concordance(args):
    x, y = _model(args.model_x), _model(args.model_y)
    if x.dim != y.dim:
        raise UsageError("models must have the same dimension")
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    rep = strong_concordance_check(x, y, args.grid)
    obj = {
        "verdict": rep.verdict,
        "median_condition": rep.median_ok,
        "median_detail": rep.median_detail,
        "grid_copula_dominance": rep.grid_copula_ok,
        "grid_survival_dominance": rep.grid_survival_ok,
        "grid_points": rep.grid_points,
        "worst_copula_gap": rep.worst_copula_gap,
        "worst_survival_gap": rep.worst_survival_gap,
        "note": "grid checks are approximate; the median condition is exact",
    }
    _emit(json.dumps(obj, indent=2) + "\n", args.output)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="medialcorr", description="Multivariate medial correlation.")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $MEDIALCORR_THREADS or CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="estimate from a CSV file")
    e.add_argument("--input", required=True)
    e.add_argument("--columns", required=True, help="comma-separated names or 0-based indices")
    e.add_argument("--delimiter", default=",", choices=[",", ";"])
    e.add_argument("--no-header", action="store_true")
    e.add_argument("--bootstrap", type=int, default=0, metavar="B")
    e.add_argument("--level", type=float, default=0.95)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--format", choices=["json", "table"], default="json")
    e.add_argument("--output")
    e.set_defaults(func=cmd_estimate)

    x = sub.add_parser("exact", help="exact coefficients of a copula model")
    x.add_argument("--model", required=True)
    x.add_argument("--I", help="1-based indices, e.g. 1,2")
    x.add_argument("--J", help="1-based indices, e.g. 3")
    x.add_argument("--format", choices=["json", "table"], default="json")
    x.add_argument("--output")
    x.set_defaults(func=cmd_exact)

    s = sub.add_parser("simulate", help="draw a seeded sample as CSV")
    s.add_argument("--model", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--output", required=True)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="run the golden and property checks")
    v.add_argument("--suite", choices=["examples", "properties", "all"], default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--wine", default=os.environ.get("MEDIALCORR_WINE_CSV"),
                   help="path to winequality-white.csv (adds the wine table check)")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("concordance-check", help="strong concordance diagnostic")
    c.add_argument("--model-x", required=True)
    c.add_argument("--model-y", required=True)
    c.add_argument("--grid", type=int, default=6)
    c.add_argument("--output")
    c.set_defaults(func=cmd_concordance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CsvError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
