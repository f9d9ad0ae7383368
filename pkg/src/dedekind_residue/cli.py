"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 a prime divides the index and no override was given.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import bounds, estimators, explicit_formula as ef, oracle
from .numfield import InvalidFieldError, make_field, parse_poly
from .splitting import UnsupportedIndexDivisor, load_overrides, split_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INDEX = 0, 1, 2, 3

ESTIMATE_COLUMNS = ("method", "X", "estimate", "bound_kind", "bound", "log_delta_used", "n", "r1", "wall_time")
MINIMAL_X_COLUMNS = ("log10_disc", "degree", "target", "kind", "X", "bound_at_X", "bound_at_X_minus_1")
SPLIT_COLUMNS = ("p", "splitting", "index_divisor")
VERIFY_COLUMNS = ("check", "lhs", "rhs", "residual", "budget", "passed")
VALIDATE_COLUMNS = ("d", "method", "X", "estimate", "truth", "error", "certified_bound", "passed")


class UsageError(Exception):
    pass


def _num(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return None
        return float(f"{v:.15g}")
    if isinstance(v, dict):
        return {k: _num(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_num(x) for x in v]
    return v


def _cell(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def _emit(args, obj, columns, rows=None):
    """One JSON object, or a header line plus rows of TSV."""
    out = sys.stdout
    if args.format == "json":
        out.write(json.dumps(_num(obj)) + "\n")
        return
    out.write("\t".join(columns) + "\n")
    for row in (rows if rows is not None else [obj]):
        out.write("\t".join(_cell(row.get(c)) for c in columns) + "\n")


# -- field input ------------------------------------------------------------

def _field(args, need_poly=True):
    if args.poly is None:
        if need_poly:
            raise UsageError("this command needs --poly (splitting needs a polynomial)")
        return None
    if getattr(args, "log10_disc", None) is not None:
        raise UsageError("give either --poly or --log10-disc/--degree, not both")
    try:
        return make_field(parse_poly(args.poly), args.field_disc)
    except (InvalidFieldError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _overrides(args, field):
    if not getattr(args, "override", None):
        return None
    try:
        return load_overrides(args.override, field.n)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _disc_degree(args):
    if args.poly is not None:
        raise UsageError("give either --poly or --log10-disc/--degree, not both")
    if args.log10_disc is None or args.degree is None:
        raise UsageError("need --log10-disc and --degree")
    if not args.log10_disc > 0 or args.degree < 2:
        raise UsageError("need log10 discriminant > 0 and degree >= 2")
    return args.log10_disc * math.log(10.0), args.degree


# -- commands ---------------------------------------------------------------

def _certified_bound(kind, field, X, sigma, table, threads):
    L, n, r1 = field.log_delta_upper, field.n, field.r1
    if kind == "thm1":
        return bounds.thm1_bound(L, n, X, include_beta=False)
    if kind == "thm1-beta":
        return bounds.thm1_bound(L, n, X, include_beta=True)
    if kind == "thm2":
        s = sigma if sigma is not None else bounds.optimal_sigma(L)
        tps = estimators.prime_zeta_log_sum(field, X, s, True, table=table, threads=threads)
        return bounds.thm2_bound(bounds.BoundInputs(L, n, X, r1, s, tps))
    if kind == "corollary":
        tps = estimators.prime_zeta_log_sum(field, X, 1.5, False, table=table, threads=threads)
        return bounds.corollary_bound(L, n, r1, X, tps)
    raise UsageError(f"unknown bound kind {kind!r}")


def cmd_estimate(args):
    field = _field(args)
    if args.x is None:
        raise UsageError("need --x")
    X = args.x
    t0 = time.perf_counter()
    try:
        table = split_table(field, X, _overrides(args, field), args.threads)
        res = estimators.estimate(field, X, args.method, table=table, threads=args.threads)
        bound = None
        kind = args.bound
        if args.method == "f" and kind != "none" and field.n >= 2:
            bound = _certified_bound(kind, field, X, args.sigma, table, args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = {
        "method": args.method,
        "X": X,
        "estimate": res.value,
        "bound_kind": kind,
        "log_delta_used": field.log_delta_upper,
        "n": field.n,
        "r1": field.r1,
        "wall_time": time.perf_counter() - t0,
    }
    if bound is not None:
        report["bound"] = bound
    _emit(args, report, ESTIMATE_COLUMNS)
    return EXIT_OK


def cmd_minimal_x(args):
    L, n = _disc_degree(args)
    kind = args.bound or "thm1-beta"
    if kind not in ("thm1", "thm1-beta"):
        raise UsageError("minimal-x supports --bound thm1 or thm1-beta")
    if not args.target > 0:
        raise UsageError("target must be positive")
    X = bounds.minimal_X(L, n, args.target, kind)
    beta_on = kind == "thm1-beta"
    below = X - 1 if X - 1 > (9 if beta_on else 68) else None
    report = {
        "log10_disc": args.log10_disc,
        "degree": n,
        "target": args.target,
        "kind": kind,
        "X": X,
        "bound_at_X": bounds.thm1_bound(L, n, X, beta_on, bounds.TABLE1_CONSTANT),
        "bound_at_X_minus_1": (bounds.thm1_bound(L, n, below, beta_on, bounds.TABLE1_CONSTANT)
                               if below else None),
    }
    _emit(args, report, MINIMAL_X_COLUMNS)
    return EXIT_OK


def cmd_table1(args):
    rows = bounds.table1(args.target)
    if args.format == "json":
        cells = [{"log10_disc": e, "degree": n, "X": v}
                 for e, vals in rows for n, v in zip(bounds.TABLE1_DEGREES, vals)]
        _emit(args, {"target": args.target, "cells": cells}, ())
        return EXIT_OK
    cols = ("log10_disc",) + tuple(f"n={n}" for n in bounds.TABLE1_DEGREES)
    dict_rows = [dict(zip(cols, (e,) + tuple(vals))) for e, vals in rows]
    _emit(args, None, cols, dict_rows)
    return EXIT_OK


def cmd_split(args):
    field = _field(args)
    if args.x is None:
        raise UsageError("need --x")
    table = split_table(field, args.x, _overrides(args, field), args.threads, strict=False)
    rows = []
    for i in range(len(table)):
        loc = table.local(i)
        rows.append({"p": loc.p, "splitting": str(loc), "index_divisor": loc.index_divisor})
    if args.format == "json":
        _emit(args, {"X": args.x, "primes": rows}, ())
    else:
        _emit(args, None, SPLIT_COLUMNS, rows)
    return EXIT_OK


def _zeros(args):
    path = args.zeros or os.environ.get("ZETA_ZEROS_FILE")
    if path is None:
        path = ef.bundled_zeros_path()
    if not os.path.isfile(path):
        raise UsageError(f"zeros file not found: {path}")
    try:
        return ef.load_zeros(path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args):
    zeros = _zeros(args)
    try:
        if args.check == "weil":
            s = args.sigma if args.sigma is not None else 1.5
            X = args.x if args.x is not None else 20.0
            r = ef.weil_residual(zeros, ef.TestFunctionParams(s, X), args.prime_cutoff)
            report = {"check": "weil", "s": s, "X": X, "zeros": zeros.count, "lhs": r.lhs, "rhs": r.rhs,
                      "residual": r.residual, "budget": r.tail_estimate, "passed": r.passed}
        elif args.check == "stark":
            s = args.sigma if args.sigma is not None else 2.0
            r = ef.stark_sum_check(zeros, s, args.prime_cutoff)
            report = {"check": "stark", "sigma": s, "zeros": zeros.count, "lhs": r.lhs, "rhs": r.rhs,
                      "residual": r.residual, "budget": r.tail_estimate, "passed": r.passed}
        else:
            r = ef.zeta_zero_sum_constant(zeros)
            report = {"check": "zerosum", "zeros": zeros.count, "lhs": r.partial_sum, "rhs": r.target,
                      "residual": r.target - r.partial_sum, "budget": r.tail_bound, "passed": r.passed}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, report, VERIFY_COLUMNS)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_validate(args):
    if args.d is not None:
        if args.poly is not None:
            raise UsageError("give either --d or --poly")
        if not oracle.is_fundamental(args.d):
            raise UsageError(f"{args.d} is not a fundamental discriminant")
        field = make_field(oracle.quadratic_polynomial(args.d))
    else:
        field = _field(args)
    if args.x is None:
        raise UsageError("need --x")
    try:
        rep = oracle.validate(field, args.x, args.method, threads=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, dict(rep.__dict__), VALIDATE_COLUMNS)
    if rep.passed is False:
        return EXIT_FAIL
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dedekind-residue",
        description="Approximate log of the Dedekind zeta residue from prime splitting, with GRH bounds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--threads", type=_positive_int, default=1)

    field_opts = argparse.ArgumentParser(add_help=False)
    field_opts.add_argument("--poly", help="monic integer coefficients, constant term first, e.g. 1,0,1")
    field_opts.add_argument("--field-disc", type=int, help="exact field discriminant, if known")
    field_opts.add_argument("--override", help="file of 'p: f^e ...' splitting overrides")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common, field_opts], help="estimate log kappa_K")
    p.add_argument("--log10-disc", type=float)
    p.add_argument("--degree", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--method", choices=("f", "g", "a"), default="f")
    p.add_argument("--bound", choices=("thm1", "thm1-beta", "thm2", "corollary", "none"), default="thm1-beta")
    p.add_argument("--sigma", type=float)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("minimal-x", parents=[common], help="least X meeting an error target")
    p.add_argument("--log10-disc", type=float)
    p.add_argument("--degree", type=int)
    p.add_argument("--poly")
    p.add_argument("--target", type=float, default=0.5 * math.log(2.0))
    p.add_argument("--bound", choices=("thm1", "thm1-beta"))
    p.set_defaults(func=cmd_minimal_x)

    p = sub.add_parser("table1", parents=[common], help="grid of minimal X by discriminant and degree")
    p.add_argument("--target", type=float, default=0.5 * math.log(2.0))
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("split", parents=[common, field_opts], help="dump prime splitting below X")
    p.add_argument("--x", type=float)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("verify", parents=[common], help="explicit-formula checks against zeta zeros")
    p.add_argument("--check", choices=("weil", "stark", "zerosum"), required=True)
    p.add_argument("--zeros", help="zeros file (default: $ZETA_ZEROS_FILE, then the bundled table)")
    p.add_argument("--sigma", type=float, help="s for weil, sigma for stark")
    p.add_argument("--x", type=float)
    p.add_argument("--prime-cutoff", type=int, default=ef.DEFAULT_PRIME_CUTOFF)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate", parents=[common, field_opts], help="compare with the class number formula")
    p.add_argument("--d", type=int, help="fundamental discriminant")
    p.add_argument("--x", type=float)
    p.add_argument("--method", choices=("f", "g", "a"), default="f")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedIndexDivisor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDEX


if __name__ == "__main__":
    sys.exit(main())
