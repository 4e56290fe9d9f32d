from functools import cached_property
from pydantic import BaseModel, ConfigDict
from pydantic_settings import BaseSettings
from typing import Any, Dict
from pathlib import Path
import json
import os


class Tolerances(BaseModel):
    """Numerical tolerances; every field can be overridden through RENYI_TOL_OVERRIDES"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    # Operator validation
    herm: float = 1e-10
    psd: float = 1e-10
    trace: float = 1e-10
    supp: float = 1e-12
    classical_sum: float = 1e-12
    binary_clamp: float = 1e-14
    test_range: float = 1e-10
    projection: float = 1e-8

    # Divergence decisions
    orthogonal: float = 1e-14
    support_inclusion: float = 1e-9
    affine: float = 1e-9

    # Searches
    golden: float = 1e-10
    bisection: float = 1e-10
    bisection_hi_slack: float = 1e-9
    d0_offset: float = 1e-12
    local_search: float = 1e-7

    # Cross-checks
    method_residual: float = 1e-6
    ratio_cluster: float = 1e-9
    tie: float = 1e-12
    bound_slack: float = 1e-12
    verdict_margin: float = 1e-6


class Settings(BaseSettings):
    # Disable .env file loading
    class Config:
        env_file = None

    # Enumeration budgets
    type_budget: int = int(os.getenv("RENYI_TYPE_BUDGET", "1000000"))
    max_quantum_dim: int = int(os.getenv("RENYI_MAX_QUANTUM_DIM", "8"))
    dense_budget: int = int(os.getenv("RENYI_DENSE_BUDGET", "4096"))
    exhaustive_max_atoms: int = int(os.getenv("RENYI_EXHAUSTIVE_MAX_ATOMS", "20"))

    # Search configuration
    default_seed: int = int(os.getenv("RENYI_SEED", "42"))
    default_restarts: int = int(os.getenv("RENYI_RESTARTS", "4"))
    local_search_sweeps: int = int(os.getenv("RENYI_LOCAL_SEARCH_SWEEPS", "4"))
    psi_grid_points: int = 64
    t_grid_points: int = 1024
    hoeffding_max_doublings: int = 200

    # CLI
    scan_workers: int = int(os.getenv("RENYI_SCAN_WORKERS", "4"))
    fixtures_dir: Path = Path(os.getenv("RENYI_FIXTURES_DIR", "Data/fixtures"))
    log_level: str = os.getenv("LOG_LEVEL", "INFO")

    # JSON map merged over the default tolerances
    tol_overrides: str = os.getenv("RENYI_TOL_OVERRIDES", "{}")

    @cached_property
    def tolerances(self) -> Tolerances:
        """Default tolerances with RENYI_TOL_OVERRIDES applied"""
        return parse_tolerances(self.tol_overrides)


def parse_tolerances(raw: str) -> Tolerances:
    """Build Tolerances from a JSON override map; raises ValueError on bad input"""
    try:
        overrides: Dict[str, Any] = json.loads(raw) if raw and raw.strip() else {}
    except json.JSONDecodeError as e:
        raise ValueError(f"RENYI_TOL_OVERRIDES is not valid JSON: {e}") from e
    if not isinstance(overrides, dict):
        raise ValueError("RENYI_TOL_OVERRIDES must be a JSON object")
    return Tolerances(**overrides)


settings = Settings()
