import argparse
import logging

from commands.common import add_alpha_flags, add_input_flags, add_output_flags, add_search_flags
from models.results import Method
from models.run_config import Command, RunConfig
from services.errors import EXIT_OK
from services.family_registry import FamilyRegistry, PairContext
from services.report_writer import emit
from services.state_io import read_pair

logger = logging.getLogger(__name__)

COLUMNS = ["family", "alpha", "value", "method", "residual"]


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(Command.COMPUTE.value, help="evaluate divergence families on a state pair")
    add_input_flags(parser)
    add_alpha_flags(parser)
    parser.add_argument("--family", dest="families", action="append", default=[],
                        help=f"one of {', '.join(FamilyRegistry.get_available_families())} or all (repeatable)")
    parser.add_argument("--method", choices=[m.value for m in Method], default=Method.BOTH.value,
                        help="characterisation used for regularized-test")
    add_search_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    """One row per requested family and alpha"""
    rho, sigma = read_pair(config.inputs)
    families = FamilyRegistry.resolve(config.families)
    ctx = PairContext(rho=rho, sigma=sigma, method=Method(config.method), restarts=config.restarts, seed=config.seed)
    logger.info(f"🚀 Computing {len(families)} families at {len(config.alphas)} alpha values")
    rows = FamilyRegistry.evaluate_many(families, ctx, config.alphas)
    emit(rows, config.output_format, config.out, columns=COLUMNS)
    return EXIT_OK
