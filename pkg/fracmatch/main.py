"""
fracmatch - command-line entry point.

Routes to eval / sweep / oracle / optimize / bounds / selftest and maps
exceptions to exit codes in one place.
"""

import sys
from collections.abc import Sequence

from loguru import logger
from pydantic import ValidationError

from fracmatch.commands import build_parser
from fracmatch.commands.common import (
    EXIT_INTERNAL,
    EXIT_INTERRUPTED,
    EXIT_USAGE,
    UsageError,
    load_run_config,
)
from fracmatch.core.config import get_settings
from fracmatch.core.errors import (
    ArithmeticFailure,
    CapExceededError,
    CertificateError,
    CheckpointMismatchError,
    FracmatchError,
    PreconditionError,
    SweepInterrupted,
)
from fracmatch.core.logging import configure_logging


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    settings = get_settings()
    try:
        args = build_parser().parse_args(argv)
        run_config = load_run_config(args.config)
        level = args.log_level or run_config.log_level or settings.log_level
        configure_logging("DEBUG" if args.debug or settings.debug else level)
        return args.handler(args, run_config)
    except SystemExit as e:
        # --help
        if e.code is None or isinstance(e.code, int):
            return e.code or 0
        return EXIT_USAGE
    except (UsageError, PreconditionError, CapExceededError, CheckpointMismatchError) as e:
        logger.error(f"{e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SweepInterrupted, KeyboardInterrupt) as e:
        logger.warning(f"Interrupted, resumable from the checkpoint: {e}")
        return EXIT_INTERRUPTED
    except (ArithmeticFailure, CertificateError) as e:
        logger.error(f"Internal arithmetic failure: {e}")
        return EXIT_INTERNAL
    except (OSError, ValueError) as e:
        logger.error(f"{e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FracmatchError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception(f"Unhandled exception: {e}")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
