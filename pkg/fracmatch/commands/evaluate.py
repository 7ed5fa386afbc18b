"""`fracmatch eval`: conjectured values of p(n,k), q(n,k) and their identities."""

import argparse

from loguru import logger

from fracmatch.commands.common import (
    EXIT_OK,
    EXIT_VIOLATION,
    UsageError,
    add_common,
    emit,
)
from fracmatch.schemas.run import RunConfig
from fracmatch.services.formula_service import (
    check_complement_identity,
    check_divisibility_case,
    check_mms_identity,
    check_periodicity,
    check_periodicity_p,
    scan_identities,
    summarize,
)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="evaluate the conjectured formulas")
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument(
        "--scan", type=int, metavar="N_MAX", help="scan every identity for 2 <= k < n <= N_MAX"
    )
    parser.add_argument("--mms-n-max", type=int, help="upper n for the MMS part of --scan")
    add_common(parser)
    parser.set_defaults(handler=run)


def _scan(args: argparse.Namespace) -> int:
    failures = scan_identities(args.scan, args.mms_n_max)
    lines = [f"identity scan up to n={args.scan}"]
    for name, found in failures.items():
        first = f", first {found[0]}" if found else ""
        lines.append(f"  {name:<14} {len(found)} counterexample(s){first}")
    emit(args, failures, "\n".join(lines))
    return EXIT_VIOLATION if any(failures.values()) else EXIT_OK


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    if args.scan is not None:
        return _scan(args)
    if args.n is None or args.k is None:
        raise UsageError("eval needs --n and --k (or --scan N_MAX)")
    n, k = args.n, args.k
    summary = summarize(n, k)
    complement = check_complement_identity(n, k)
    mms = check_mms_identity(n, k)
    divisibility = check_divisibility_case(n, k)
    periodicity = check_periodicity(n, k)
    periodicity_p = check_periodicity_p(n, k)

    p_ak_args = summary.p_ak.arg_list
    n_s = summary.p_ak.n_s or {}
    lines = [
        f"p({n},{k}) = {summary.p.value}    argmax a in {summary.p.arg_list}",
        f"p({n},{k}) = {summary.p_ak.value}    s-form, argmax s in {p_ak_args}"
        f" (n_s = {[n_s.get(s) for s in p_ak_args]})",
        f"q({n},{k}) = {summary.q.value}    argmin a in {summary.q.arg_list}",
        f"C({n},{k}) = {summary.binomial}",
        f"forms agree: {'yes' if summary.forms_agree else 'NO'}",
        f"p + q = C(n,k): {'holds' if complement.holds else 'FAILS'}",
    ]
    for report in (mms, divisibility):
        if report.evaluated:
            verdict = "holds" if report.holds else f"FAILS ({report.lhs} != {report.rhs})"
        else:
            verdict = "precondition fails"
        lines.append(f"{report.name}: {verdict}")
    lines.append(f"periodicity q: {periodicity.status.value}")
    lines.append(f"periodicity p: {periodicity_p.status.value}")

    payload = {
        "summary": summary,
        "complement": complement,
        "mms": mms,
        "divisibility": divisibility,
        "periodicity": periodicity,
        "periodicityP": periodicity_p,
    }
    emit(args, payload, "\n".join(lines))
    if not complement.holds or not summary.forms_agree:
        logger.error(f"identity failure at ({n}, {k})")
        return EXIT_VIOLATION
    return EXIT_OK
