import argparse
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List

import numpy as np

from commands.common import (
    add_alpha_flags,
    add_input_flags,
    add_output_flags,
    add_search_flags,
)
from config import settings
from models.results import Method
from models.run_config import Command, RunConfig, ScanKind
from services.errors import EXIT_OK, UsageError
from services.exponent_engine import d_zero_value, hoeffding
from services.divergence_core import relative_entropy_value
from services.family_registry import FamilyRegistry, PairContext
from services.report_writer import emit
from services.state_io import read_pair

logger = logging.getLogger(__name__)

DEFAULT_R_POINTS = 21


def add_parser(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(Command.SCAN.value, help="alpha scans and Hoeffding r-scans")
    parser.add_argument("--kind", dest="scan_kind", choices=[k.value for k in ScanKind], default=ScanKind.ALPHA.value)
    add_input_flags(parser)
    add_alpha_flags(parser)
    parser.add_argument("--r-grid", metavar="LO:HI:STEPS", help="rate grid for the Hoeffding scan")
    parser.add_argument("--family", dest="families", action="append", default=[],
                        help="families for the alpha scan (default: every alpha-dependent family)")
    parser.add_argument("--method", choices=[m.value for m in Method], default=Method.BOTH.value)
    add_search_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _alpha_scan(ctx: PairContext, config: RunConfig) -> List[Dict[str, object]]:
    if not config.alphas:
        raise UsageError("The alpha scan needs --alpha-grid or --alpha values")
    families = [f for f in FamilyRegistry.resolve(config.families) if not FamilyRegistry.is_alpha_free(f)]
    if not families:
        raise UsageError("The alpha scan needs at least one alpha-dependent family")
    ctx.profile  # built once before the workers share it

    def row(alpha: float) -> Dict[str, object]:
        out: Dict[str, object] = {"x": alpha}
        for family in families:
            out[family.value] = FamilyRegistry.evaluate(family, ctx, alpha)["value"]
        return out

    with ThreadPoolExecutor(max_workers=settings.scan_workers) as pool:
        return list(pool.map(row, config.alphas))


def _hoeffding_scan(ctx: PairContext, config: RunConfig) -> List[Dict[str, object]]:
    profile = ctx.profile
    relative = relative_entropy_value(profile)
    grid = config.r_grid
    if grid is None:
        d0 = d_zero_value(profile)
        if math.isinf(d0) or math.isinf(relative):
            raise UsageError("Default r-grid needs finite D0 and relative entropy; pass --r-grid")
        grid = [float(r) for r in np.linspace(d0, relative, DEFAULT_R_POINTS)]

    def row(r: float) -> Dict[str, object]:
        point = hoeffding(profile, r, relative)
        return {"x": r, "value": point.H, "c_r": point.c_r, "u_star": point.u_star, "boundary": point.boundary}

    with ThreadPoolExecutor(max_workers=settings.scan_workers) as pool:
        return list(pool.map(row, grid))


def run(config: RunConfig) -> int:
    rho, sigma = read_pair(config.inputs)
    ctx = PairContext(rho=rho, sigma=sigma, method=Method(config.method), restarts=config.restarts, seed=config.seed)
    if config.scan_kind == ScanKind.HOEFFDING:
        rows = _hoeffding_scan(ctx, config)
    else:
        rows = _alpha_scan(ctx, config)
    logger.info(f"✅ {config.scan_kind.value} scan finished with {len(rows)} points")
    emit(rows, config.output_format, config.out)
    return EXIT_OK

