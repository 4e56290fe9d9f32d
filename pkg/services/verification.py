"""Seeded invariant suite.

Every check draws random instances, evaluates one mathematical identity or
inequality and reports the worst residual seen over its trials. A check
passes when that residual is at most its tolerance. Each check owns a random
generator derived from the suite seed and its registry position, so running a
single check with ``only`` reproduces the numbers of the full run.
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from config import settings
from models.operators import ClassicalState, DensityMatrix
from models.results import CheckResult, Method
from services.divergence_core import (
    State,
    build_psi,
    fidelity,
    psi_at,
    psi_prime_at,
    relative_entropy_value,
    sandwiched_renyi,
    standard_renyi,
)
from services.errors import RenyiError, UsageError
from services.exponent_engine import (
    chernoff,
    d0_regime_threshold,
    d_zero_value,
    hoeffding,
    hoeffding_test,
    legendre_phi,
    nagaoka_objective,
    regularized_test,
)
from services.measurement_opt import (
    exhaustive_test,
    measured_divergence,
    measured_relative_entropy,
    ncopy_table_classical,
    test_divergence_classical,
    test_divergence_quantum,
    threshold_test,
)
from services.operator_core import (
    apply_test,
    as_density,
    as_test,
    classical_tensor_power,
    density_matrix,
    mat_power,
    pinch,
    random_classical,
    random_density,
    random_unitary,
    sequence_log_probs,
    support_projection,
    tensor_power,
    trace_distance,
    type_table,
)

logger = logging.getLogger(__name__)

ALPHAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


@dataclass
class SuiteContext:
    rng: np.random.Generator
    dims: int
    trials: int
    restarts: int
    seed: int

    @property
    def few(self) -> int:
        """Trial count for checks that run the projection and basis searches"""
        return max(1, min(self.trials, 3))

    @property
    def search_restarts(self) -> int:
        """Random restarts for those searches; structured starts already hold the checked bounds"""
        return min(self.restarts, 1)

    def quantum(self, dim: Optional[int] = None, rank: Optional[int] = None) -> DensityMatrix:
        return random_density(dim or self.dims, self.rng, rank)

    def classical(self, size: Optional[int] = None) -> ClassicalState:
        return random_classical(size or self.dims, self.rng)

    def mild_quantum(self, dim: Optional[int] = None, mixing: float = 0.5) -> DensityMatrix:
        """Random state with weight `mixing` on the maximally mixed state"""
        d = dim or self.dims
        rho = self.quantum(d)
        return density_matrix((1 - mixing) * rho.entries + mixing * np.eye(d) / d)

    def pair(self, trial: int) -> Tuple[State, State]:
        """Alternates classical and full-rank quantum pairs"""
        if trial % 2 == 0:
            return self.classical(), self.classical()
        return self.quantum(), self.quantum()


@dataclass
class Check:
    check_id: str
    tolerance: float
    description: str
    fn: Callable[[SuiteContext], float]


_REGISTRY: Dict[str, Check] = {}


def check(check_id: str, tolerance: float, description: str):
    def register(fn: Callable[[SuiteContext], float]) -> Callable[[SuiteContext], float]:
        _REGISTRY[check_id] = Check(check_id, tolerance, description, fn)
        return fn
    return register


def available_checks() -> List[str]:
    return list(_REGISTRY)


def _worst(values: Iterable[float]) -> float:
    return max((float(v) for v in values), default=0.0)


# ---------------------------------------------------------------------------
# Operator core
# ---------------------------------------------------------------------------

@check("mat-power-additivity", 1e-8, "A^x A^y = A^(x+y) on full-rank states")
def _mat_power_additivity(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho = ctx.quantum()
        x, y = ctx.rng.uniform(-0.5, 1.5, 2)
        lhs = mat_power(rho, x).entries @ mat_power(rho, y).entries
        rhs = mat_power(rho, x + y).entries
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(rhs)))))
    return worst


@check("support-projection-idempotent", 1e-9, "support projection is idempotent with trace = rank")
def _support_projection(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rank = int(ctx.rng.integers(1, ctx.dims + 1))
        p = support_projection(ctx.quantum(rank=rank)).entries
        worst = max(worst, float(np.max(np.abs(p @ p - p))), abs(float(np.real(np.trace(p))) - rank))
    return worst


@check("type-mass", 1e-10, "type classes carry total probability one")
def _type_mass(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p = ctx.classical()
        for n in range(1, 5):
            counts, log_mult = type_table(n, p.size)
            total = math.exp(logsumexp(log_mult + sequence_log_probs(counts, p.weights)))
            worst = max(worst, abs(total - 1.0))
    return worst


@check("apply-test-range", 1e-10, "Tr rho T lies in [0,1] and both outcomes sum to one")
def _apply_test_range(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho = ctx.quantum()
        u = random_unitary(ctx.dims, ctx.rng)
        t = as_test((u * ctx.rng.uniform(0, 1, ctx.dims)) @ u.conj().T)
        accept, reject = apply_test(rho, t)
        worst = max(worst, -accept, accept - 1, -reject, reject - 1, abs(accept + reject - 1))
    return worst


# ---------------------------------------------------------------------------
# Divergence core
# ---------------------------------------------------------------------------

@check("psi-endpoints", 1e-9, "psi(1) = log Tr rho sigma^0 and psi(0) = log Tr rho^0 sigma")
def _psi_endpoints(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho = ctx.quantum(rank=int(ctx.rng.integers(max(1, ctx.dims - 1), ctx.dims + 1)))
        sigma = ctx.quantum(rank=int(ctx.rng.integers(max(1, ctx.dims - 1), ctx.dims + 1)))
        profile = build_psi(rho, sigma)
        one = math.log(float(np.real(np.trace(rho.entries @ support_projection(sigma).entries))))
        zero = math.log(float(np.real(np.trace(support_projection(rho).entries @ sigma.entries))))
        worst = max(worst, abs(psi_at(profile, 1.0) - one), abs(psi_at(profile, 0.0) - zero))
    return worst


@check("psi-nonpositive", 1e-12, "psi <= 0 on [0,1]")
def _psi_nonpositive(ctx: SuiteContext) -> float:
    grid = np.linspace(0, 1, 21)
    worst = 0.0
    for trial in range(ctx.trials):
        profile = build_psi(*ctx.pair(trial))
        worst = max(worst, _worst(psi_at(profile, a) for a in grid))
    return worst


@check("psi-convex", 1e-9, "second differences of psi are non-negative")
def _psi_convex(ctx: SuiteContext) -> float:
    worst = 0.0
    grid = np.linspace(0, 1, 41)
    for trial in range(ctx.trials):
        profile = build_psi(*ctx.pair(trial))
        values = np.array([psi_at(profile, a) for a in grid])
        worst = max(worst, float(np.max(-(values[:-2] + values[2:] - 2 * values[1:-1]))))
    return worst


@check("psi-prime-fd", 1e-6, "psi' matches central differences")
def _psi_prime_fd(ctx: SuiteContext) -> float:
    h = 1e-5
    worst = 0.0
    for trial in range(ctx.trials):
        profile = build_psi(*ctx.pair(trial))
        for a in ALPHAS:
            fd = (psi_at(profile, a + h) - psi_at(profile, a - h)) / (2 * h)
            worst = max(worst, abs(psi_prime_at(profile, a) - fd))
    return worst


@check("skew-symmetry", 1e-9, "(1-a) D_a(rho||sigma) = a D_(1-a)(sigma||rho)")
def _skew_symmetry(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        for a in ALPHAS:
            lhs = (1 - a) * standard_renyi(rho, sigma, a).value
            rhs = a * standard_renyi(sigma, rho, 1 - a).value
            worst = max(worst, abs(lhs - rhs))
    return worst


@check("monotone-alpha", 1e-9, "standard and sandwiched divergences are non-decreasing in alpha")
def _monotone_alpha(ctx: SuiteContext) -> float:
    grid = [0.05] + ALPHAS + [0.95, 1.1, 1.5, 2.0, 3.0]
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        for family in (standard_renyi, sandwiched_renyi):
            values = np.array([family(rho, sigma, a, profile).value for a in grid])
            worst = max(worst, float(np.max(values[:-1] - values[1:])))
    return worst


@check("sandwiched-below-standard", 1e-9, "D*_a <= D_a")
def _sandwiched_below_standard(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        for a in ALPHAS + [1.5, 2.0]:
            gap = sandwiched_renyi(rho, sigma, a, profile).value - standard_renyi(rho, sigma, a, profile).value
            worst = max(worst, gap)
    return worst


@check("iten-renes-sutter", 1e-9, "a D_a <= D*_a for a in (0,1)")
def _iten_renes_sutter(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        for a in ALPHAS:
            gap = a * standard_renyi(rho, sigma, a, profile).value - sandwiched_renyi(rho, sigma, a, profile).value
            worst = max(worst, gap)
    return worst


@check("data-processing", 1e-9, "pinching onto the eigenbasis of sigma does not increase D_a")
def _data_processing(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho, sigma = ctx.quantum(), ctx.quantum()
        basis = sigma.spectrum[1]
        rho_p, sigma_p = pinch(rho, basis), pinch(sigma, basis)
        for a in ALPHAS:
            gap = standard_renyi(rho_p, sigma_p, a).value - standard_renyi(rho, sigma, a).value
            worst = max(worst, gap)
    return worst


@check("fidelity-half", 1e-9, "D*_(1/2) = -2 log F")
def _fidelity_half(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho, sigma = ctx.quantum(), ctx.quantum()
        worst = max(worst, abs(sandwiched_renyi(rho, sigma, 0.5).value + 2 * math.log(fidelity(rho, sigma))))
    return worst


# ---------------------------------------------------------------------------
# Exponent engine
# ---------------------------------------------------------------------------

@check("method-cross-check", 1e-6, "Hoeffding-root and Salzmann-Datta values agree")
def _method_cross_check(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        for a in ALPHAS:
            root = regularized_test(rho, sigma, a, Method.HOEFFDING_ROOT, profile).value
            sup = regularized_test(rho, sigma, a, Method.SALZMANN_DATTA, profile).value
            worst = max(worst, abs(root - sup))
    return worst


@check("chernoff-identity", 1e-7, "regularized value at alpha = 1/2 equals the Chernoff divergence")
def _chernoff_identity(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        worst = max(worst, abs(regularized_test(rho, sigma, 0.5, profile=profile).value - chernoff(profile)))
    return worst


@check("sandwich-bounds", 1e-8, "D_a / 2 <= regularized <= D_a, strict upper gap on generic 3-point pairs")
def _sandwich_bounds(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        generic = trial % 2 == 0
        if generic:
            rho, sigma = ctx.classical(3), ctx.classical(3)
        profile = build_psi(rho, sigma)
        for a in ALPHAS:
            d_a = standard_renyi(rho, sigma, a, profile).value
            value = regularized_test(rho, sigma, a, profile=profile).value
            worst = max(worst, d_a / 2 - value, value - d_a)
            if generic:
                worst = max(worst, 1e-6 - (d_a - value))
    return worst


@check("regularized-skew-symmetry", 1e-7, "(1-a) regularized_a(rho||sigma) = a regularized_(1-a)(sigma||rho)")
def _regularized_skew_symmetry(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        forward, backward = build_psi(rho, sigma), build_psi(sigma, rho)
        for a in ALPHAS:
            lhs = (1 - a) * regularized_test(rho, sigma, a, profile=forward).value
            rhs = a * regularized_test(sigma, rho, 1 - a, profile=backward).value
            worst = max(worst, abs(lhs - rhs))
    return worst


@check("weak-additivity", 1e-7, "regularized value of two copies is twice the single-copy value")
def _weak_additivity(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        if isinstance(rho, ClassicalState):
            rho2, sigma2 = classical_tensor_power(rho, 2), classical_tensor_power(sigma, 2)
        else:
            rho2, sigma2 = tensor_power(rho, 2), tensor_power(sigma, 2)
        profile, profile2 = build_psi(rho, sigma), build_psi(rho2, sigma2)
        for a in (0.3, 0.5, 0.7):
            single = regularized_test(rho, sigma, a, profile=profile).value
            double = regularized_test(rho2, sigma2, a, profile=profile2).value
            worst = max(worst, abs(double - 2 * single))
    return worst


@check("hoeffding-monotone", 1e-10, "H_r is non-increasing in r")
def _hoeffding_monotone(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        profile = build_psi(*ctx.pair(trial))
        d0, rel = d_zero_value(profile), relative_entropy_value(profile)
        values = [hoeffding(profile, r, rel).H for r in np.linspace(d0, rel, 20)]
        worst = max(worst, _worst(np.diff(values)))
    return worst


@check("strict-positivity", 0.0, "distinct states have a regularized value above 1e-8")
def _strict_positivity(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        if trace_distance(_density(rho), _density(sigma)) <= 1e-6:
            continue
        profile = build_psi(rho, sigma)
        for a in (0.1, 0.5, 0.9):
            worst = max(worst, 1e-8 - regularized_test(rho, sigma, a, profile=profile).value)
    return worst


@check("alpha-limits", 0.05, "regularized value tends to D0 at alpha = 0.01 and to D at alpha = 0.99")
def _alpha_limits(ctx: SuiteContext) -> float:
    # near-mixed pairs keep the (1 - alpha) slope term at 0.99 below the tolerance
    worst = 0.0
    for _ in range(ctx.trials):
        rho, sigma = ctx.mild_quantum(mixing=0.75), ctx.mild_quantum(mixing=0.75)
        profile = build_psi(rho, sigma)
        low = regularized_test(rho, sigma, 0.01, profile=profile).value
        high = regularized_test(rho, sigma, 0.99, profile=profile).value
        worst = max(worst, abs(low - d_zero_value(profile)), abs(high - relative_entropy_value(profile)))
    return worst


@check("renyi-ratio", 1e-9, "D_a >= a(1-b)/(a - 2ab + b) D_b")
def _renyi_ratio(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        values = {a: standard_renyi(rho, sigma, a, profile).value for a in ALPHAS}
        for a in ALPHAS:
            for b in ALPHAS:
                worst = max(worst, a * (1 - b) / (a - 2 * a * b + b) * values[b] - values[a])
    return worst


@check("chernoff-fixed-point", 1e-7, "H_C = C")
def _chernoff_fixed_point(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        profile = build_psi(*ctx.pair(trial))
        c = chernoff(profile)
        worst = max(worst, abs(hoeffding(profile, c).H - c))
    return worst


@check("d0-regime", 1e-9, "regularized value equals D0 for alpha below the threshold")
def _d0_regime(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho, sigma = ctx.quantum(rank=max(1, ctx.dims - 1)), ctx.quantum()
        profile = build_psi(rho, sigma)
        threshold = d0_regime_threshold(profile)
        if threshold is None:
            continue
        for a in (0.5 * threshold, 0.9 * threshold):
            if 0 < a < 1:
                worst = max(worst, abs(regularized_test(rho, sigma, a, profile=profile).value - d_zero_value(profile)))
    return worst


@check("hoeffding-attainability", 1e-12, "Hoeffding test errors respect both exponential bounds")
def _hoeffding_attainability(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        rho, sigma = ctx.classical(), ctx.classical()
        for n in (2, 4, 8):
            for r in (0.05, 0.1, 0.2):
                for a in (0.3, 0.7):
                    result = hoeffding_test(rho, sigma, n, r, a)
                    worst = max(
                        worst,
                        result.type_two_error - result.type_two_bound,
                        result.type_one_error - result.type_one_bound,
                    )
    for _ in range(ctx.few):
        rho, sigma = ctx.quantum(2), ctx.quantum(2)
        for r in (0.05, 0.2):
            result = hoeffding_test(rho, sigma, 3, r, 0.5)
            worst = max(worst, result.type_two_error - result.type_two_bound, result.type_one_error - result.type_one_bound)
    return worst


@check("nagaoka-bound", 1e-9, "(1/n) log of the minimal weighted error is at most -phi(b)")
def _nagaoka_bound(ctx: SuiteContext) -> float:
    worst = 0.0
    for trial in range(ctx.trials):
        rho, sigma = ctx.pair(trial)
        profile = build_psi(rho, sigma)
        max_n = 6 if isinstance(rho, ClassicalState) else 2
        for b in (-0.2, 0.0, 0.2):
            bound = -legendre_phi(profile, b)
            for n in range(1, max_n + 1):
                worst = max(worst, nagaoka_objective(rho, sigma, n, b) - bound)
    return worst


# ---------------------------------------------------------------------------
# Measurement optimisation
# ---------------------------------------------------------------------------

@check("threshold-optimality", 1e-10, "level-set prefixes reach the exhaustive subset maximum")
def _threshold_optimality(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        k = int(ctx.rng.integers(2, 5))
        p, q = ctx.classical(k), ctx.classical(k)
        for n in (1, 2):
            if k ** n > settings.exhaustive_max_atoms:
                continue
            pn, qn = classical_tensor_power(p, n), classical_tensor_power(q, n)
            for a in (0.2, 0.5, 0.8):
                full, _ = exhaustive_test(pn.weights, qn.weights, a)
                prefix, _ = threshold_test(np.log(pn.weights), np.log(qn.weights), a)
                worst = max(worst, abs(full - prefix))
    return worst


@check("ordering-chain", 1e-6, "test <= measured <= D_a and regularized <= test + log 2/(1-a)")
def _ordering_chain(ctx: SuiteContext) -> float:
    worst = 0.0
    dim = min(ctx.dims, 3)
    for _ in range(ctx.few):
        rho, sigma = ctx.quantum(dim), ctx.quantum(dim)
        profile = build_psi(rho, sigma)
        for a in (0.3, 0.7):
            test = test_divergence_quantum(rho, sigma, a, ctx.search_restarts, ctx.seed)
            meas = measured_divergence(rho, sigma, a, ctx.search_restarts, ctx.seed, test_optimum=test)
            d_a = standard_renyi(rho, sigma, a, profile).value
            reg = regularized_test(rho, sigma, a, profile=profile).value
            worst = max(worst, test.value - meas.value, meas.value - d_a, reg - test.value - math.log(2) / (1 - a))
    return worst


@check("ncopy-row-bound", 1e-9, "regularized <= (1/n) D_test(n copies) + log 2/(n(1-a))")
def _ncopy_row_bound(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p, q = ctx.classical(), ctx.classical()
        for a in (0.3, 0.7):
            reg = regularized_test(p, q, a).value
            for row in ncopy_table_classical(p, q, a, 3):
                worst = max(worst, reg - row.dtest_per_copy - math.log(2) / (row.n * (1 - a)))
    return worst


@check("test-skew-symmetry", 1e-9, "(1-a) D_test,a(p||q) = a D_test,(1-a)(q||p)")
def _test_skew_symmetry(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p, q = ctx.classical(), ctx.classical()
        for a in ALPHAS:
            lhs = (1 - a) * test_divergence_classical(p, q, a).value
            rhs = a * test_divergence_classical(q, p, 1 - a).value
            worst = max(worst, abs(lhs - rhs))
    return worst


@check("test-strict-positivity", 0.0, "distinct classical states have a positive test value")
def _test_strict_positivity(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p, q = ctx.classical(), ctx.classical()
        for a in (0.1, 0.5, 0.9):
            value = test_divergence_classical(p, q, a).value
            worst = max(worst, 0.0 if value > 0 else 1.0)
    return worst


@check("test-monotone-alpha", 1e-9, "classical test values are non-decreasing in alpha")
def _test_monotone_alpha(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p, q = ctx.classical(), ctx.classical()
        values = np.array([test_divergence_classical(p, q, a).value for a in ALPHAS])
        worst = max(worst, float(np.max(values[:-1] - values[1:])))
    return worst


@check("test-alpha-limits", 0.05, "test value near D0 at alpha = 0.01; measured near the measured relative entropy at 0.99")
def _test_alpha_limits(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.trials):
        p, q = ctx.classical(), ctx.classical()
        worst = max(worst, abs(test_divergence_classical(p, q, 0.01).value - d_zero_value(build_psi(p, q))))
    for _ in range(ctx.few):
        rho, sigma = ctx.mild_quantum(2), ctx.mild_quantum(2)
        meas = measured_divergence(rho, sigma, 0.99, ctx.search_restarts, ctx.seed)
        relative = measured_relative_entropy(rho, sigma, ctx.search_restarts, ctx.seed)
        worst = max(worst, abs(meas.value - relative.value))
    return worst


@check("measured-below-sandwiched", 0.0, "measured < sandwiched - 1e-6 for non-commuting invertible qubit pairs")
def _measured_below_sandwiched(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.few):
        rho, sigma = ctx.quantum(2), ctx.quantum(2)
        for a in (0.6, 0.8):
            meas = measured_divergence(rho, sigma, a, ctx.search_restarts, ctx.seed)
            worst = max(worst, meas.value - (sandwiched_renyi(rho, sigma, a).value - 1e-6))
    return worst


@check("commuting-oracle", 1e-9, "quantum searches reproduce classical values on diagonal pairs")
def _commuting_oracle(ctx: SuiteContext) -> float:
    worst = 0.0
    for _ in range(ctx.few):
        p, q = ctx.classical(), ctx.classical()
        rho, sigma = as_density(p), as_density(q)
        for a in (0.3, 0.7):
            classical_value = test_divergence_classical(p, q, a).value
            test = test_divergence_quantum(rho, sigma, a, ctx.search_restarts, ctx.seed)
            meas = measured_divergence(rho, sigma, a, ctx.search_restarts, ctx.seed, test_optimum=test)
            worst = max(
                worst,
                abs(test.value - classical_value),
                abs(meas.value - standard_renyi(p, q, a).value),
            )
    return worst


def _density(x: State) -> DensityMatrix:
    return as_density(x) if isinstance(x, ClassicalState) else x


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

def run_suite(
    only: Optional[List[str]] = None,
    dims: int = 3,
    trials: int = 20,
    seed: Optional[int] = None,
    restarts: Optional[int] = None,
) -> List[CheckResult]:
    """Run the registered checks (or the named subset) in registry order"""
    seed = settings.default_seed if seed is None else seed
    restarts = settings.default_restarts if restarts is None else restarts
    if dims < 2:
        raise UsageError(f"--dims must be at least 2, got {dims}")
    if trials < 1:
        raise UsageError(f"--trials must be positive, got {trials}")
    unknown = [name for name in only or [] if name not in _REGISTRY]
    if unknown:
        raise UsageError(f"Unknown check(s): {', '.join(unknown)}; available: {', '.join(_REGISTRY)}")

    results = []
    suite_started = time.perf_counter()
    for position, (check_id, entry) in enumerate(_REGISTRY.items()):
        if only and check_id not in only:
            continue
        ctx = SuiteContext(
            rng=np.random.default_rng([seed, position]), dims=dims, trials=trials, restarts=restarts, seed=seed
        )
        started = time.perf_counter()
        detail = None
        try:
            residual = entry.fn(ctx)
        except RenyiError as e:
            residual, detail = math.inf, f"{type(e).__name__}: {e}"
        passed = residual <= entry.tolerance
        elapsed = time.perf_counter() - started
        if passed:
            logger.info(f"✅ {check_id}: worst residual {residual:.3e} ({elapsed:.1f}s)")
        else:
            logger.error(f"❌ {check_id}: worst residual {residual:.3e} exceeds {entry.tolerance:.1e}")
        results.append(
            CheckResult(
                check_id=check_id,
                passed=passed,
                worst_residual=residual,
                tolerance=entry.tolerance,
                trials=trials,
                detail=detail or entry.description,
            )
        )
    failed = sum(not r.passed for r in results)
    logger.info(f"📊 {len(results) - failed}/{len(results)} checks passed in {time.perf_counter() - suite_started:.1f}s")
    return results
