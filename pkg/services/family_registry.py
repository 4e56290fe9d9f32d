import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from config import settings
from models.profile import PsiProfile
from models.results import Family, Method
from services.divergence_core import (
    State,
    build_psi,
    d_max,
    d_zero,
    relative_entropy,
    sandwiched_renyi,
    standard_renyi,
)
from services.errors import UsageError
from services.exponent_engine import chernoff, regularized_test
from services.measurement_opt import (
    measured_divergence,
    test_divergence_classical,
    test_divergence_quantum,
)
from models.operators import ClassicalState

logger = logging.getLogger(__name__)


@dataclass
class PairContext:
    """One state pair plus the lazily built profile shared by every family"""
    rho: State
    sigma: State
    method: Method = Method.BOTH
    restarts: int = settings.default_restarts
    seed: int = settings.default_seed
    _profile: Optional[PsiProfile] = field(default=None, repr=False)

    @property
    def profile(self) -> PsiProfile:
        if self._profile is None:
            self._profile = build_psi(self.rho, self.sigma)
        return self._profile

    @property
    def classical(self) -> bool:
        return isinstance(self.rho, ClassicalState)


Row = Dict[str, object]
Evaluator = Callable[[PairContext, Optional[float]], Row]


def _row(family: Family, alpha: Optional[float], value: float, method: Optional[str] = None,
         residual: Optional[float] = None) -> Row:
    return {"family": family.value, "alpha": alpha, "value": value, "method": method, "residual": residual}


def _standard(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.STANDARD, alpha, standard_renyi(ctx.rho, ctx.sigma, alpha, ctx.profile).value)


def _sandwiched(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.SANDWICHED, alpha, sandwiched_renyi(ctx.rho, ctx.sigma, alpha, ctx.profile).value)


def _test(ctx: PairContext, alpha: Optional[float]) -> Row:
    if ctx.classical:
        result = test_divergence_classical(ctx.rho, ctx.sigma, alpha)
        return _row(Family.TEST, alpha, result.value, "exhaustive" if result.certified else "threshold")
    result = test_divergence_quantum(ctx.rho, ctx.sigma, alpha, ctx.restarts, ctx.seed)
    return _row(Family.TEST, alpha, result.value, "local-search")


def _measured(ctx: PairContext, alpha: Optional[float]) -> Row:
    if ctx.classical:
        # Classical pairs: the measured divergence is D_alpha itself
        return _row(Family.MEASURED, alpha, standard_renyi(ctx.rho, ctx.sigma, alpha, ctx.profile).value, "closed-form")
    result = measured_divergence(ctx.rho, ctx.sigma, alpha, ctx.restarts, ctx.seed)
    return _row(Family.MEASURED, alpha, result.value, "local-search")


def _relative_entropy(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.RELATIVE_ENTROPY, None, relative_entropy(ctx.rho, ctx.sigma, ctx.profile).value)


def _d0(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.D0, None, d_zero(ctx.rho, ctx.sigma, ctx.profile).value)


def _dmax(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.DMAX, None, d_max(ctx.rho, ctx.sigma, ctx.profile).value)


def _chernoff(ctx: PairContext, alpha: Optional[float]) -> Row:
    return _row(Family.CHERNOFF, None, chernoff(ctx.profile))


def _regularized(ctx: PairContext, alpha: Optional[float]) -> Row:
    result = regularized_test(ctx.rho, ctx.sigma, alpha, ctx.method, ctx.profile)
    method = result.shortcut or result.method.value
    return _row(Family.REGULARIZED_TEST, alpha, result.value, method, result.residual)


class FamilyRegistry:
    """Registry of divergence families evaluable on a state pair"""

    _families: Dict[Family, Evaluator] = {
        Family.STANDARD: _standard,
        Family.SANDWICHED: _sandwiched,
        Family.MEASURED: _measured,
        Family.TEST: _test,
        Family.RELATIVE_ENTROPY: _relative_entropy,
        Family.D0: _d0,
        Family.DMAX: _dmax,
        Family.CHERNOFF: _chernoff,
        Family.REGULARIZED_TEST: _regularized,
    }

    # Families that accept alpha > 1
    _extended_alpha = {Family.STANDARD, Family.SANDWICHED}
    _alpha_free = {Family.RELATIVE_ENTROPY, Family.D0, Family.DMAX, Family.CHERNOFF}

    @classmethod
    def resolve(cls, names: List[str]) -> List[Family]:
        """Family tags from CLI names; 'all' expands to every family"""
        if not names or "all" in names:
            return list(cls._families)
        families = []
        for name in names:
            try:
                families.append(Family(name))
            except ValueError:
                raise UsageError(
                    f"Unknown family: {name}; choose from {', '.join(cls.get_available_families())} or all"
                ) from None
        return families

    @classmethod
    def get_available_families(cls) -> List[str]:
        return [f.value for f in cls._families]

    @classmethod
    def is_alpha_free(cls, family: Family) -> bool:
        return family in cls._alpha_free

    @classmethod
    def evaluate(cls, family: Family, ctx: PairContext, alpha: Optional[float]) -> Row:
        if family in cls._alpha_free:
            alpha = None
        elif alpha is None:
            raise UsageError(f"Family '{family.value}' needs --alpha")
        elif alpha > 1 and family not in cls._extended_alpha:
            raise UsageError(f"Family '{family.value}' is defined for alpha in (0,1), got {alpha}")
        logger.debug(f"Evaluating {family.value} at alpha={alpha}")
        return cls._families[family](ctx, alpha)

    @classmethod
    def evaluate_many(cls, families: List[Family], ctx: PairContext, alphas: List[float]) -> List[Row]:
        """One row per family and alpha; alpha-free families contribute a single row.
        Alphas above 1 are skipped for families defined on (0,1) when several families are requested."""
        rows: List[Row] = []
        for family in families:
            if family in cls._alpha_free:
                rows.append(cls.evaluate(family, ctx, None))
                continue
            for alpha in alphas:
                if alpha > 1 and family not in cls._extended_alpha and len(families) > 1:
                    continue
                rows.append(cls.evaluate(family, ctx, alpha))
        return rows
