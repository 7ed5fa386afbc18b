"""`fracmatch bounds`: the Berry-Esseen constant audit."""

import argparse
from fractions import Fraction

from loguru import logger

from fracmatch.commands.common import EXIT_OK, EXIT_VIOLATION, add_common, emit
from fracmatch.schemas.bounds import LineStatus
from fracmatch.schemas.run import RunConfig
from fracmatch.services.bounds_service import (
    be_empirical_gap,
    build_report,
    format_report,
    lower_sum_checks,
)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bounds", help="audit the printed constants")
    parser.add_argument("--report", action="store_true", help="fixed-order constant table (default)")
    parser.add_argument("--strict", action="store_true", help="exit 2 on fail_as_printed lines")
    parser.add_argument("--lower-sums", action="store_true", help="exact b < 9 lower-sum checks")
    parser.add_argument("--n-list", type=_int_list, help="n values for --lower-sums")
    parser.add_argument(
        "--gap", type=int, nargs=3, metavar=("N", "K", "A"), help="|P(i <= ka/n) - 1/2| exactly"
    )
    parser.add_argument("--sigma", help="sigma for the report, as a decimal or ratio")
    parser.add_argument("--n-regime", type=int, help="smallest n of the asymptotic regime")
    parser.add_argument("--delta", help="delta for the report, as a decimal or ratio")
    add_common(parser)
    parser.set_defaults(handler=run)


def _lower_sums(args: argparse.Namespace, run_config: RunConfig) -> int:
    section = run_config.bounds
    report = lower_sum_checks(args.n_list or section.lower_sum_n, section.b_max)
    failing = report.failing_b()
    lines = [
        f"lower sums: {len(report.checks)} checks, failing b = {failing or 'none'}",
        *(
            f"  chain n={c.n} k={c.k} a={c.a}: {c.lhs_ratio.hi:.6f} <= {c.rhs_ratio.lo:.6f}"
            f" {'holds' if c.holds else 'FAILS'}"
            for c in report.chain
        ),
    ]
    emit(args, report, "\n".join(lines))
    if args.strict and (failing or not all(c.holds for c in report.chain)):
        return EXIT_VIOLATION
    return EXIT_OK


def _gap(args: argparse.Namespace) -> int:
    n, k, a = args.gap
    gap = be_empirical_gap(n, k, a)
    below = gap.certainly_lt(Fraction(1, 4))
    emit(
        args,
        {"n": n, "k": k, "a": a, "gap": gap, "belowQuarter": below},
        f"gap({n},{k},{a}) in [{gap.lo:.9f}, {gap.hi:.9f}], below 1/4: {below}",
    )
    return EXIT_OK


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    if args.lower_sums:
        return _lower_sums(args, run_config)
    if args.gap:
        return _gap(args)
    section = run_config.bounds
    report = build_report(
        Fraction(args.sigma or section.sigma),
        args.n_regime or section.n,
        Fraction(args.delta or section.delta),
    )
    emit(args, report, format_report(report))
    failing = report.count(LineStatus.FAIL_AS_PRINTED)
    if failing:
        logger.warning(f"{failing} printed constant(s) disagree with direct evaluation")
    return EXIT_VIOLATION if args.strict and failing else EXIT_OK
