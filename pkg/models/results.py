from enum import Enum
from pydantic import BaseModel, ConfigDict, Field
from typing import List, Optional, Tuple
import numpy as np

from models.operators import Test


class Family(str, Enum):
    STANDARD = "standard"
    SANDWICHED = "sandwiched"
    MEASURED = "measured"
    TEST = "test"
    RELATIVE_ENTROPY = "relative-entropy"
    D0 = "D0"
    DMAX = "Dmax"
    CHERNOFF = "chernoff"
    REGULARIZED_TEST = "regularized-test"


class Method(str, Enum):
    HOEFFDING_ROOT = "hoeffding-root"
    SALZMANN_DATTA = "salzmann-datta"
    BOTH = "both"


class EqualityCase(str, Enum):
    CASE_A = "case-a"
    CASE_B = "case-b"
    NEITHER = "neither"


class Verdict(str, Enum):
    IDENTICAL = "identical"
    ALL_EQUAL = "all-equal"
    TWO_LEVEL = "two-level"
    GENERIC = "generic"
    UNCLASSIFIED = "unclassified"


class DivergenceValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    family: Family
    alpha: Optional[float] = None


class PureStatePanel(BaseModel):
    overlap_sq: float
    alpha: float
    standard: float
    sandwiched: float
    measured: float = Field(description="Measured, test-measured and regularized test-measured value")


class HoeffdingPoint(BaseModel):
    r: float
    H: float
    u_star: Optional[float] = None
    boundary: Optional[str] = Field(default=None, description="'u->0-', 'u->-inf' or 'infinite' when the sup is not interior")
    c_r: Optional[float] = None


class RegularizedResult(BaseModel):
    alpha: float
    value: float
    method: Method
    r_alpha: Optional[float] = None
    residual: Optional[float] = None
    shortcut: Optional[str] = Field(default=None, description="Analytic path taken instead of the root/sup search")


class HoeffdingTestResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    r: float
    alpha: float
    log_threshold: float
    type_one_error: float
    type_two_error: float
    type_one_bound: float
    type_two_bound: float
    bounds_hold: bool
    accepted_types: Optional[List[Tuple[int, ...]]] = None
    test: Optional[Test] = None


class TestOptimum(BaseModel):
    __test__ = False  # not a pytest class

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float
    optimizer: Test
    rank: int
    restarts_used: int = 0
    certified: bool = False
    accepted: Optional[Tuple[str, ...]] = None


class MeasurementOptimum(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float
    basis: np.ndarray = Field(description="Unitary whose columns are the measurement vectors")
    outcome_p: np.ndarray
    outcome_q: np.ndarray
    restarts_used: int = 0


class ProjectionDiagnostic(BaseModel):
    residual: float
    complement_residual: float
    value: float


class EqualityReport(BaseModel):
    condition_two_level: bool
    omega0: Optional[Tuple[str, ...]] = None
    c0: Optional[float] = None
    c1: Optional[float] = None
    degenerate_case: EqualityCase = EqualityCase.NEITHER
    kappa_or_eta: Optional[float] = None
    levels: List[float] = Field(default_factory=list)
    max_residual: float = 0.0


class NCopyRow(BaseModel):
    n: int
    dtest_per_copy: float
    gap_to_dalpha: float
    certified: bool


class GapReport(BaseModel):
    alpha: float
    dalpha: float
    regularized_test: float
    ncopy_rows: List[NCopyRow]
    dhat_lower_bound: float
    equality: EqualityReport
    verdict: Verdict


class CheckResult(BaseModel):
    check_id: str
    passed: bool
    worst_residual: float
    tolerance: float
    trials: int
    detail: Optional[str] = None
