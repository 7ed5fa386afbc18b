"""`fracmatch selftest`: the fast property suite."""

import argparse

from fracmatch.commands.common import EXIT_INTERNAL, EXIT_OK, add_common, emit, resolve_seed
from fracmatch.schemas.run import RunConfig
from fracmatch.services.selftest_service import run_selftest


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("selftest", help="run the fast property suite")
    parser.add_argument("--seed", type=int)
    add_common(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    report = run_selftest(resolve_seed(args, run_config))
    lines = [f"{'ok' if c.ok else 'FAILED':<7} {c.name}: {c.detail}" for c in report.checks]
    emit(args, report, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_INTERNAL
