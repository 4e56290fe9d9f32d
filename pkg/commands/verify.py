import argparse
import logging

from commands.common import add_output_flags, add_search_flags
from models.run_config import Command, RunConfig
from services.errors import EXIT_NUMERIC, EXIT_OK
from services.report_writer import emit
from services.verification import available_checks, run_suite

logger = logging.getLogger(__name__)

COLUMNS = ["check_id", "passed", "worst_residual", "tolerance", "trials", "detail"]


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(Command.VERIFY.value, help="run the seeded invariant suite")
    parser.add_argument("--only", action="append", default=[], metavar="CHECK",
                        help=f"run only the named check (repeatable); one of {', '.join(available_checks())}")
    parser.add_argument("--dims", type=int, default=3, help="dimension / alphabet size of random instances")
    parser.add_argument("--trials", type=int, default=20, help="random instances per check")
    add_search_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    logger.info(f"🚀 Running invariant suite (dims={config.dims}, trials={config.trials}, seed={config.seed})")
    results = run_suite(config.only, config.dims, config.trials, config.seed, config.restarts)
    emit([r.model_dump() for r in results], config.output_format, config.out, columns=COLUMNS)
    failed = [r.check_id for r in results if not r.passed]
    if failed:
        logger.error(f"❌ {len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        return EXIT_NUMERIC
    logger.info(f"✅ All {len(results)} checks passed")
    return EXIT_OK
