import argparse
import logging

from commands.common import add_alpha_flags, add_input_flags, add_output_flags, single_alpha
from models.run_config import Command, RunConfig
from services.errors import EXIT_OK
from services.measurement_opt import gap_explorer
from services.report_writer import emit
from services.state_io import read_pair, require_classical

logger = logging.getLogger(__name__)

COLUMNS = ["n", "dtest_per_copy", "gap_to_dalpha", "certified"]


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(Command.NCOPY.value, help="classical n-copy test table and regime verdict")
    add_input_flags(parser)
    add_alpha_flags(parser)
    parser.add_argument("--n-max", type=int, default=3)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    p, q = require_classical(*read_pair(config.inputs))
    alpha = single_alpha(config)
    report = gap_explorer(p, q, alpha, config.n_max)
    rows = [row.model_dump() for row in report.ncopy_rows]
    summary = {
        "alpha": report.alpha,
        "dalpha": report.dalpha,
        "regularized_test": report.regularized_test,
        "dhat_lower_bound": report.dhat_lower_bound,
        "verdict": report.verdict,
        "condition_two_level": report.equality.condition_two_level,
        "omega0": " ".join(report.equality.omega0) if report.equality.omega0 else None,
        "equality_case": report.equality.degenerate_case,
    }
    logger.info(f"✅ Verdict for alpha={alpha}: {report.verdict.value}")
    emit(rows, config.output_format, config.out, columns=COLUMNS, summary=summary)
    return EXIT_OK
