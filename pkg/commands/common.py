import argparse
from pathlib import Path
from typing import List, Optional

import numpy as np

from config import settings
from models.run_config import OutputFormat, RunConfig
from services.errors import UsageError


def parse_grid(grid: str) -> List[float]:
    """'lo:hi:steps' -> evenly spaced points; a comma list is taken verbatim"""
    try:
        if ":" in grid:
            lo, hi, steps = grid.split(":")
            steps = int(steps)
            if steps < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(lo), float(hi), steps)]
        return [float(x) for x in grid.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"Invalid grid '{grid}': expected lo:hi:steps or a comma-separated list") from None


def add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", action="append", type=Path, default=[], metavar="STATE.json",
                        help="state file; give exactly two (rho first, then sigma)")


def add_alpha_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", action="append", type=float, default=[], help="alpha value (repeatable)")
    parser.add_argument("--alpha-grid", metavar="LO:HI:STEPS", help="evenly spaced alpha values")


def add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", type=int, default=settings.default_restarts,
                        help="random restarts of the projection and basis searches")
    parser.add_argument("--seed", type=int, default=settings.default_seed)


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="output file (stdout when omitted)")
    parser.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                        default=OutputFormat.CSV.value)


def collect_alphas(args: argparse.Namespace) -> List[float]:
    alphas = list(getattr(args, "alpha", []) or [])
    grid: Optional[str] = getattr(args, "alpha_grid", None)
    if grid:
        alphas.extend(parse_grid(grid))
    return alphas


def single_alpha(config: RunConfig) -> float:
    if len(config.alphas) != 1:
        raise UsageError(f"'{config.command.value}' needs exactly one --alpha, got {len(config.alphas)}")
    return config.alphas[0]
