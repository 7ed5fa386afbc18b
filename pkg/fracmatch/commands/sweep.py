"""`fracmatch sweep`: the finite verification of tail_sum_strict(n,k,a) <= C(n-1,k)."""

import argparse

from loguru import logger

from fracmatch.commands.common import (
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_VIOLATION,
    add_common,
    emit,
    pick,
    resolve_seed,
)
from fracmatch.core.config import get_settings
from fracmatch.core.errors import SweepInterrupted
from fracmatch.schemas.run import RunConfig
from fracmatch.schemas.sweep import KRule, SweepConfig, SweepSummary
from fracmatch.services.sweep_service import audit_filter, random_cells
from fracmatch.workers import run_sweep

# CLI dest -> SweepConfig field
_FLAGS = {
    "n_min": "n_min",
    "n_max": "n_max",
    "k_rule": "k_rule",
    "k_list": "k_list",
    "out": "out_path",
    "checkpoint": "checkpoint_path",
    "slack_bits": "filter_slack_bits",
    "exact_only": "exact_only",
    "resume": "resume",
    "stop_after": "stop_after",
    "progress": "progress",
}


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sweep", help="run the finite tail-sum sweep")
    parser.add_argument("--n-min", type=int)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--k-rule", choices=[r.value for r in KRule])
    parser.add_argument("--k-list", type=_int_list, help="comma-separated k for --k-rule explicit")
    parser.add_argument("--jobs", type=int, help="worker processes (default FRACMATCH_JOBS)")
    parser.add_argument("--out", help="JSONL ledger path")
    parser.add_argument("--checkpoint", help="checkpoint JSON path")
    parser.add_argument("--slack-bits", type=float, help="refined-filter slack in bits")
    parser.add_argument("--exact-only", action="store_true", default=None)
    parser.add_argument("--resume", action="store_true", default=None)
    parser.add_argument("--stop-after", type=int, help="stop after this many shards")
    parser.add_argument("--progress", action="store_true", default=None)
    parser.add_argument(
        "--audit", type=int, metavar="CELLS", help="compare filter and exact verdicts on a sample"
    )
    parser.add_argument("--audit-n-max", type=int, default=1500)
    parser.add_argument(
        "--audit-full-range", action="store_true", help="sample k up to n-1, not only k <= n/4"
    )
    parser.add_argument("--seed", type=int)
    add_common(parser)
    parser.set_defaults(handler=run)


def build_config(args: argparse.Namespace, run_config: RunConfig) -> SweepConfig:
    """Settings, then the run file's ``sweep`` mapping, then CLI flags."""
    settings = get_settings()
    values = {
        "out_path": str(settings.data_path / "sweep.jsonl"),
        "checkpoint_path": str(settings.data_path / "sweep.checkpoint.json"),
        "filter_slack_bits": settings.filter_slack_bits,
    }
    values.update(run_config.sweep)
    for dest, field in _FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[field] = value
    values["workers"] = pick(
        args.jobs, run_config.sweep.get("workers"), run_config.jobs, settings.jobs
    )
    return SweepConfig.model_validate(values)


def _audit(args: argparse.Namespace, run_config: RunConfig) -> int:
    seed = resolve_seed(args, run_config)
    audit = audit_filter(
        random_cells(args.audit, args.audit_n_max, seed=seed, full_range=args.audit_full_range)
    )
    text = (
        f"audit: {audit.cells} cells, {audit.violations} violating, "
        f"{len(audit.disagreements)} disagreements, "
        f"paths {dict(sorted(audit.path_counts.items()))}"
    )
    emit(args, audit, text)
    return EXIT_INTERNAL if audit.disagreements else EXIT_OK


def _summary_text(summary: SweepSummary) -> str:
    state = "interrupted, " if summary.interrupted else ""
    return (
        f"{state}cells {summary.cells}, records {summary.records_written}, "
        f"violations {len(summary.violations)}, paths {dict(sorted(summary.path_counts.items()))}\n"
        f"ledger {summary.out_path}"
    )


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    if args.audit is not None:
        return _audit(args, run_config)
    config = build_config(args, run_config)
    try:
        summary = run_sweep(config)
    except SweepInterrupted as e:
        if e.summary is not None:
            emit(args, e.summary, _summary_text(e.summary))
        raise
    except OSError as e:
        logger.error(f"Sweep I/O failure: {e}")
        raise SweepInterrupted(str(e)) from e
    emit(args, summary, _summary_text(summary))
    return EXIT_VIOLATION if summary.violations else EXIT_OK
