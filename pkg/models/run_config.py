from enum import Enum
from pydantic import BaseModel, Field, model_validator
from typing import List, Optional
from pathlib import Path

from config import settings


class Command(str, Enum):
    COMPUTE = "compute"
    SCAN = "scan"
    NCOPY = "ncopy"
    VERIFY = "verify"
    HOEFFDING_TEST = "hoeffding-test"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ScanKind(str, Enum):
    ALPHA = "alpha"
    HOEFFDING = "hoeffding"


# Commands whose alpha may exceed 1 (standard and sandwiched families)
_EXTENDED_ALPHA_COMMANDS = {Command.COMPUTE}


class RunConfig(BaseModel):
    command: Command
    inputs: List[Path] = Field(default_factory=list)
    families: List[str] = Field(default_factory=list)
    alphas: List[float] = Field(default_factory=list)
    r_grid: Optional[List[float]] = None
    scan_kind: ScanKind = ScanKind.ALPHA
    method: str = "both"
    n: Optional[int] = None
    r: Optional[float] = None
    n_max: int = 3
    restarts: int = settings.default_restarts
    seed: int = settings.default_seed
    only: List[str] = Field(default_factory=list)
    dims: int = 3
    trials: int = 20
    out: Optional[Path] = None
    output_format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def check_alphas(self) -> "RunConfig":
        for alpha in self.alphas:
            if alpha <= 0 or alpha == 1:
                raise ValueError(f"alpha must be positive and different from 1, got {alpha}")
            if alpha > 1 and self.command not in _EXTENDED_ALPHA_COMMANDS:
                raise ValueError(f"alpha must lie in (0,1) for '{self.command.value}', got {alpha}")
        if self.n_max < 1:
            raise ValueError("n-max must be a positive integer")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")
        return self
