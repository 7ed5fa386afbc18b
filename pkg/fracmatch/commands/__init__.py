"""CLI subcommands; each module registers its parser and handler."""

from fracmatch.commands import bounds, evaluate, optimize, oracle, selftest, sweep
from fracmatch.commands.common import ArgumentParser
from fracmatch.core.config import get_settings

COMMANDS = (evaluate, sweep, oracle, optimize, bounds, selftest)


def build_parser() -> ArgumentParser:
    settings = get_settings()
    parser = ArgumentParser(prog=settings.app_name, description="Exact verification suite")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {settings.app_version}"
    )
    parser.add_argument("--log-level", help="loguru level (default from settings)")
    parser.add_argument("--debug", action="store_true", help="shorthand for --log-level DEBUG")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for module in COMMANDS:
        module.register(subparsers)
    return parser
