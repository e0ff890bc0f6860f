"""Command line front end.

    gmitest test [options] counts.csv
    gmitest simulate [options]

Exit status: 0 on success (whatever the decision), 2 on bad input,
3 when a statistic is undefined for the data (too few occupied
rows/columns, or zero estimated variance).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .errors import DegenerateVariance, GmiTestError, InsufficientSupport, InvalidDf
from .gmi import gmi_test
from .pearson import pearson_test
from .results import ALL_METHODS, Method
from .simulate import (
    DEFAULT_P_VALUES,
    DEFAULT_SIZES,
    Hypothesis,
    format_json,
    format_table1,
    format_tsv,
    run_table1,
)
from .tables import read_counts_csv

EXIT_OK, EXIT_INPUT, EXIT_UNDEFINED = 0, 2, 3

RESULT_FIELDS = (
    "method", "statistic", "p_value", "reject", "alpha", "lambda",
    "sigma2_hat", "df", "i_hat", "j_hat", "n", "warnings",
)


def _dims(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected I,J (e.g. 11,11), got {text!r}") from None
    if i < 1 or j < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return i, j


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sample sizes must be positive")
    return sizes


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=2.0, help="escort exponent (default 2)")
    p.add_argument("--alpha", type=float, default=0.01, help="significance level (default 0.01)")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmitest",
        description="Normal test of independence via generalized mutual information.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    t = sub.add_parser("test", help="test independence on a counts CSV")
    t.add_argument("csv", help="comma-separated counts, one table row per line")
    t.add_argument(
        "--method",
        choices=[m.value for m in ALL_METHODS] + ["all"],
        default="all",
    )
    t.add_argument("--dims", type=_dims, help="nominal I,J for pearson-theoretical")
    t.add_argument("--format", choices=("json", "tsv"), default="json")
    t.add_argument("--sparsity-threshold", type=float, default=5.0,
                   help="warn when n/(I_hat*J_hat) is below this (default 5)")
    t.add_argument("--header", action="store_true", help="skip the first CSV line")
    _add_common(t)

    s = sub.add_parser("simulate", help="run the Monte Carlo size/power study")
    s.add_argument("--one-minus-p", type=float, action="append",
                   help="run only this 1-p value (repeatable); default is the full grid")
    s.add_argument("--sizes", type=_sizes, default=DEFAULT_SIZES)
    s.add_argument("--hypothesis", choices=("h0", "ha", "both"), default="both")
    s.add_argument("--replicates", type=int, default=10_000)
    s.add_argument("--dims", type=_dims, default=(11, 11))
    s.add_argument("--threads", type=int, default=None,
                   help="worker processes, 0 = all cores (default: $GMI_THREADS or 1)")
    s.add_argument("--format", choices=("json", "tsv", "table"), default="json")
    _add_common(s)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tsv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, list):
        return "; ".join(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def cmd_test(args) -> int:
    methods = ALL_METHODS if args.method == "all" else (Method(args.method),)
    try:
        counts = read_counts_csv(args.csv, header=args.header)
    except (GmiTestError, OSError, ValueError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_INPUT

    results, status = [], EXIT_OK
    for m in methods:
        try:
            if m.is_gmi:
                res = gmi_test(counts, args.lam, args.alpha, m, args.sparsity_threshold)
            elif m is Method.PEARSON_OBSERVED:
                res = pearson_test(counts, args.alpha, "observed")
            else:
                res = pearson_test(counts, args.alpha, "theoretical", args.dims)
        except (DegenerateVariance, InsufficientSupport, InvalidDf) as exc:
            _error(type(exc).__name__, f"{m.value}: {exc}")
            status = EXIT_UNDEFINED
            continue
        except GmiTestError as exc:
            _error(type(exc).__name__, f"{m.value}: {exc}")
            return EXIT_INPUT
        results.append(res.to_dict())

    if args.format == "json":
        if args.method == "all":
            text = json.dumps(results, indent=2) + "\n"
        else:
            text = json.dumps(results[0], indent=2) + "\n" if results else ""
    else:
        lines = ["\t".join(RESULT_FIELDS)]
        lines += ["\t".join(_tsv_value(r[f]) for f in RESULT_FIELDS) for r in results]
        text = "\n".join(lines) + "\n"
    if text:
        _emit(text, args.out)
    return status


def cmd_simulate(args) -> int:
    hyps = (Hypothesis.H0, Hypothesis.HA) if args.hypothesis == "both" else (Hypothesis(args.hypothesis),)
    p_values = DEFAULT_P_VALUES if not args.one_minus_p else tuple(round(1.0 - x, 12) for x in args.one_minus_p)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("GMI_THREADS", "1") or 1)
    try:
        results = run_table1(
            p_values, args.sizes, args.replicates, args.seed, args.lam, args.alpha,
            args.dims, hyps, workers=threads,
        )
    except GmiTestError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_INPUT
    fmt = {"json": format_json, "tsv": format_tsv, "table": format_table1}[args.format]
    _emit(fmt(results), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not 0.0 < args.alpha < 1.0:
        parser.error("--alpha must lie in (0, 1)")
    if not args.lam > 0:
        parser.error("--lambda must be positive")
    gmi_requested = args.subcommand == "simulate" or args.method in ("all", "zab", "za", "zb")
    if gmi_requested and args.lam == 1.0:
        parser.error("--lambda 1 is not allowed for the GMI tests: at lambda = 1 the "
                     "t_a/t_b split has zero asymptotic variance, so lambda must differ from 1")
    if args.subcommand == "simulate":
        if args.replicates < 1:
            parser.error("--replicates must be >= 1")
        if args.one_minus_p and not all(0.0 < x < 1.0 for x in args.one_minus_p):
            parser.error("--one-minus-p must lie in (0, 1)")
        return cmd_simulate(args)
    return cmd_test(args)


if __name__ == "__main__":
    sys.exit(main())
