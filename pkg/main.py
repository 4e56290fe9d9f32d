import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from commands import compute, hoeffding_test, ncopy, scan, verify
from commands.common import collect_alphas, parse_grid
from config import settings
from models.run_config import RunConfig
from services.errors import EXIT_OK, EXIT_USAGE, RenyiError, UsageError

logger = logging.getLogger(__name__)

COMMANDS = (compute, scan, ncopy, verify, hoeffding_test)


class CliParser(argparse.ArgumentParser):
    """argparse parser that reports usage problems as UsageError (exit 1)"""

    def error(self, message: str) -> None:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog="renyi",
        description="Quantum Renyi divergences, Hoeffding exponents and regularized test-measured divergences",
    )
    parser.add_argument("--log-level", default=settings.log_level, help="logging level (default from LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        "command": args.command,
        "inputs": getattr(args, "input", []),
        "families": getattr(args, "families", []),
        "alphas": collect_alphas(args),
        "r_grid": parse_grid(args.r_grid) if getattr(args, "r_grid", None) else None,
    }
    for name in ("scan_kind", "method", "n", "r", "n_max", "restarts", "seed", "only", "dims", "trials", "out",
                 "output_format"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        raise UsageError(first["msg"].removeprefix("Value error, ")) from None


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=getattr(logging, str(args.log_level).upper(), logging.INFO),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        try:
            settings.tolerances
        except ValueError as e:
            raise UsageError(f"Invalid tolerance overrides: {e}") from None
        config = build_config(args)
        return args.handler(config)
    except RenyiError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except SystemExit as e:
        # --help exits through argparse
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
