"""Helpers shared by the subcommands."""

import argparse
from collections.abc import Callable
from typing import Any

from pydantic import BaseModel

from fracmatch.core.config import RunFile, get_settings
from fracmatch.core.errors import FracmatchError
from fracmatch.schemas.common import dumps
from fracmatch.schemas.run import RunConfig

Handler = Callable[[argparse.Namespace, RunConfig], int]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_INTERRUPTED = 3
EXIT_INTERNAL = 4


class UsageError(FracmatchError):
    """Bad command line or run file."""


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with status 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def add_common(parser: argparse.ArgumentParser) -> None:
    """--json and --config, accepted by every subcommand."""
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--config", metavar="FILE.yaml", help="YAML run file")


def load_run_config(path: str | None) -> RunConfig:
    if not path:
        return RunConfig()
    return RunConfig.model_validate(RunFile(path).as_dict())


def pick(*values: Any) -> Any:
    """First value that is not None: CLI flag, then run file, then settings."""
    for v in values:
        if v is not None:
            return v
    return None


def resolve_jobs(args: argparse.Namespace, run: RunConfig) -> int:
    return pick(getattr(args, "jobs", None), run.jobs, get_settings().jobs)


def resolve_seed(args: argparse.Namespace, run: RunConfig) -> int:
    return pick(getattr(args, "seed", None), run.seed, get_settings().seed)


def emit(args: argparse.Namespace, payload: BaseModel | dict | list, text: str) -> None:
    """Print JSON under --json, the human-readable text otherwise."""
    if args.json:
        print(dumps(payload, indent=2))
    else:
        print(text)
