"""Legendre transforms of psi, the Hoeffding curve, Chernoff divergence and the
regularized test-measured Renyi divergence."""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from config import settings
from models.operators import ClassicalState
from models.profile import PsiProfile
from models.results import (
    EqualityCase,
    HoeffdingPoint,
    HoeffdingTestResult,
    Method,
    RegularizedResult,
)
from services.divergence_core import (
    State,
    as_density_pair,
    build_psi,
    check_alpha,
    coerce_pair,
    petz_degenerate_case,
    psi_at,
    psi_increment,
    psi_prime_at,
    relative_entropy_value,
)
from services.errors import BracketError, InvalidParameterError, NumericInvariantError
from services.operator_core import (
    diagonal_classical,
    is_diagonal,
    projection_test,
    sequence_log_probs,
    tensor_power,
    type_table,
)
from services.optimize import golden_section_max, golden_section_min, grid_then_golden_max

logger = logging.getLogger(__name__)


def _log_mass(x: np.ndarray) -> float:
    if x.size == 0:
        return -math.inf
    return float(logsumexp(x))


def legendre_phi(profile: PsiProfile, c: float) -> float:
    """phi(c) = max over alpha in [0,1] of c(alpha - 1) - psi(alpha)"""
    if profile.orthogonal:
        return math.inf
    _, value = golden_section_max(
        lambda a: c * (a - 1) - psi_at(profile, a), 0.0, 1.0, settings.tolerances.golden
    )
    return value


def legendre_phi_plus(profile: PsiProfile, c: float) -> float:
    return legendre_phi(profile, c) + c


def chernoff(profile: PsiProfile) -> float:
    """C = -min psi on [0,1]"""
    if profile.orthogonal:
        return math.inf
    if profile.identical:
        return 0.0
    _, low = golden_section_min(lambda a: psi_at(profile, a), 0.0, 1.0, settings.tolerances.golden)
    return max(-low, 0.0)


def d_zero_value(profile: PsiProfile) -> float:
    return math.inf if profile.orthogonal else -psi_at(profile, 0.0)


def hoeffding_at_d0(profile: PsiProfile) -> float:
    """H at r = D0: -psi'(0) - psi(0)"""
    return -psi_prime_at(profile, 0.0) - psi_at(profile, 0.0)


def _hoeffding_objective(profile: PsiProfile, r: float, d0: float):
    """g(u) = u r - (1 - u) psi(1/(1 - u)) rewritten around psi(0)"""
    gap = r - d0

    def g(u: float) -> float:
        scale = 1.0 - u
        return r - scale * (gap + psi_increment(profile, 1.0 / scale))

    return g


def hoeffding(profile: PsiProfile, r: float, relative: Optional[float] = None) -> HoeffdingPoint:
    tol = settings.tolerances
    d0 = d_zero_value(profile)
    if profile.orthogonal or r < d0 - tol.d0_offset:
        return HoeffdingPoint(r=r, H=math.inf, boundary="infinite")
    if abs(r - d0) <= tol.d0_offset:
        h = hoeffding_at_d0(profile)
        return HoeffdingPoint(r=r, H=h, boundary="u->-inf", c_r=r - h)

    if relative is None:
        relative = relative_entropy_value(profile)
    if r >= relative:
        return HoeffdingPoint(r=r, H=0.0, u_star=0.0, boundary="u->0-", c_r=r)

    g = _hoeffding_objective(profile, r, d0)
    u = -1.0
    g_u = g(u)
    for _ in range(settings.hoeffding_max_doublings):
        g_next = g(2 * u)
        if g_next < g_u:
            break
        u, g_u = 2 * u, g_next
    else:
        logger.warning(f"⚠️ Hoeffding bracket still growing at u={u:.3e} for r={r:.12g}")
    lo = 2 * u
    logger.debug(f"Hoeffding bracket [{lo:.3e}, 0] for r={r:.12g}")
    u_star, h = golden_section_max(g, lo, 0.0, tol.golden * max(1.0, abs(lo)))
    h = max(h, 0.0)
    return HoeffdingPoint(r=r, H=h, u_star=u_star, c_r=r - h)


def d0_regime_threshold(profile: PsiProfile) -> Optional[float]:
    """alpha* with regularized value = D0 exactly for alpha <= alpha*; None when D0 = 0"""
    if profile.orthogonal:
        return None
    psi0 = psi_at(profile, 0.0)
    if -psi0 <= settings.tolerances.d0_offset:
        return None
    denominator = psi_prime_at(profile, 0.0) + 2 * psi0
    if denominator >= 0:
        return 1.0
    return min(psi0 / denominator, 1.0)


def _hoeffding_root(profile: PsiProfile, alpha: float) -> Tuple[float, float, Optional[str]]:
    """(value, r_alpha, shortcut) from the crossing of H_r with ((1-alpha)/alpha) r"""
    tol = settings.tolerances
    k = (1 - alpha) / alpha
    d0 = d_zero_value(profile)
    d_alpha = psi_at(profile, alpha) / (alpha - 1)
    if d0 > tol.d0_offset and hoeffding_at_d0(profile) <= k * d0:
        return d0, d0, "d0-regime"

    lo = d0 + tol.d0_offset
    hi = d_alpha
    if hi <= lo:
        return max(d_alpha, d0), max(d_alpha, d0), "degenerate-interval"

    relative = relative_entropy_value(profile)

    def G(r: float) -> float:
        return hoeffding(profile, r, relative).H - k * r

    g_lo = G(lo)
    g_hi = G(hi)
    if g_hi > 0:
        if g_hi <= tol.bisection_hi_slack:
            logger.warning(f"⚠️ G(D_alpha)={g_hi:.3e} within slack; returning D_alpha")
            return hi, hi, None
        raise BracketError(lo, hi, g_lo, g_hi)
    if g_lo < 0:
        raise BracketError(lo, hi, g_lo, g_hi)
    if g_hi == 0:
        return hi, hi, None
    r_alpha = brentq(G, lo, hi, xtol=tol.bisection, maxiter=500)
    return r_alpha, r_alpha, None


def _salzmann_datta(profile: PsiProfile, alpha: float) -> float:
    """alpha * sup over t in [0,1] of psi(t) / (t(2 alpha - 1) - alpha)"""
    slope = 2 * alpha - 1
    if max(-alpha, slope - alpha) >= 0:
        raise NumericInvariantError(f"Denominator t(2a-1)-a is not negative on [0,1] for alpha={alpha}")

    def objective(t: float) -> float:
        return psi_at(profile, t) / (t * slope - alpha)

    _, best = grid_then_golden_max(
        objective, 0.0, 1.0, settings.t_grid_points, settings.tolerances.golden
    )
    return alpha * best


def regularized_test(
    rho: State,
    sigma: State,
    alpha: float,
    method: Method = Method.BOTH,
    profile: Optional[PsiProfile] = None,
) -> RegularizedResult:
    """Regularized test-measured Renyi divergence by the Hoeffding root and/or the Salzmann-Datta sup"""
    check_alpha(alpha, allow_above_one=False)
    method = Method(method)
    profile = build_psi(rho, sigma) if profile is None else profile
    residual = 0.0 if method == Method.BOTH else None

    shortcut = None
    if profile.identical:
        value, shortcut = 0.0, "identical"
    elif profile.orthogonal:
        value, shortcut = math.inf, "orthogonal"
    else:
        case = petz_degenerate_case(profile)
        if case == EqualityCase.CASE_A:
            value, shortcut = d_zero_value(profile), case.value
        elif case == EqualityCase.CASE_B:
            value, shortcut = psi_at(profile, alpha) / (alpha - 1), case.value
    if shortcut is not None:
        return RegularizedResult(
            alpha=alpha, value=value, method=method, r_alpha=value, residual=residual, shortcut=shortcut
        )

    r_alpha = None
    if method in (Method.HOEFFDING_ROOT, Method.BOTH):
        value, r_alpha, shortcut = _hoeffding_root(profile, alpha)
    if method in (Method.SALZMANN_DATTA, Method.BOTH):
        sd_value = _salzmann_datta(profile, alpha)
        if method == Method.SALZMANN_DATTA:
            value = sd_value
        else:
            residual = abs(value - sd_value)
            if residual > settings.tolerances.method_residual:
                logger.error(f"❌ Methods disagree at alpha={alpha}: {value:.12g} vs {sd_value:.12g}")
                raise NumericInvariantError(
                    f"hoeffding-root and salzmann-datta differ by {residual:.3e} at alpha={alpha}"
                )
    return RegularizedResult(
        alpha=alpha, value=value, method=method, r_alpha=r_alpha, residual=residual, shortcut=shortcut
    )


def _classical_pair(rho: State, sigma: State) -> Optional[Tuple[ClassicalState, ClassicalState]]:
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        return rho, sigma
    if is_diagonal(rho) and is_diagonal(sigma):
        return diagonal_classical(rho), diagonal_classical(sigma)
    return None


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n}")


def hoeffding_test(rho: State, sigma: State, n: int, r: float, alpha: float) -> HoeffdingTestResult:
    """Positive spectral projection of rho^n - exp(n(r + psi(alpha))/alpha) sigma^n and its two errors"""
    check_alpha(alpha, allow_above_one=False)
    _check_n(n)
    if r <= 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    profile = build_psi(rho, sigma)
    psi_a = psi_at(profile, alpha)
    d_alpha = psi_a / (alpha - 1)
    log_threshold = n * (r + psi_a) / alpha
    type_two_bound = math.exp(-n * r)
    type_one_bound = math.exp(-n * ((1 - alpha) / alpha) * (d_alpha - r))

    accepted_types = None
    test = None
    pair = _classical_pair(rho, sigma)
    if pair is not None:
        p, q = pair
        counts, log_mult = type_table(n, p.size)
        lp = sequence_log_probs(counts, p.weights)
        lq = sequence_log_probs(counts, q.weights)
        accept = lp > log_threshold + lq
        type_two = math.exp(_log_mass(log_mult[accept] + lq[accept]))
        type_one = math.exp(_log_mass(log_mult[~accept] + lp[~accept]))
        accepted_types = [tuple(int(c) for c in row) for row in counts[accept]]
    else:
        rho_d, sigma_d = as_density_pair(rho, sigma)
        rho_n = tensor_power(rho_d, n).entries
        sigma_n = tensor_power(sigma_d, n).entries
        a = rho_n - math.exp(log_threshold) * sigma_n
        evals, evecs = np.linalg.eigh((a + a.conj().T) / 2)
        test = projection_test(evecs[:, evals > 0])
        type_two = float(np.real(np.trace(sigma_n @ test.entries)))
        type_one = float(np.real(np.trace(rho_n)) - np.real(np.trace(rho_n @ test.entries)))

    slack = settings.tolerances.bound_slack
    bounds_hold = type_two <= type_two_bound + slack and type_one <= type_one_bound + slack
    if not bounds_hold:
        logger.warning(
            f"⚠️ Hoeffding bounds violated: errors ({type_one:.3e}, {type_two:.3e}) "
            f"vs bounds ({type_one_bound:.3e}, {type_two_bound:.3e})"
        )
    return HoeffdingTestResult(
        n=n,
        r=r,
        alpha=alpha,
        log_threshold=log_threshold,
        type_one_error=type_one,
        type_two_error=type_two,
        type_one_bound=type_one_bound,
        type_two_bound=type_two_bound,
        bounds_hold=bounds_hold,
        accepted_types=accepted_types,
        test=test,
    )


def nagaoka_objective(rho: State, sigma: State, n: int, b: float) -> float:
    """(1/n) log of min over tests of Tr rho^n (I - T) + e^(nb) Tr sigma^n T"""
    _check_n(n)
    pair = _classical_pair(rho, sigma)
    if pair is not None:
        p, q = pair
        counts, log_mult = type_table(n, p.size)
        lp = sequence_log_probs(counts, p.weights)
        lq = sequence_log_probs(counts, q.weights)
        return _log_mass(log_mult + np.minimum(lp, n * b + lq)) / n

    rho_d, sigma_d = as_density_pair(rho, sigma)
    rho_n = tensor_power(rho_d, n).entries
    sigma_n = tensor_power(sigma_d, n).entries
    a = rho_n - math.exp(n * b) * sigma_n
    evals = np.linalg.eigvalsh((a + a.conj().T) / 2)
    minimum = float(np.real(np.trace(rho_n)) - evals[evals > 0].sum())
    if minimum <= 0:
        return -math.inf
    return math.log(minimum) / n


def salzmann_datta_finite_n(rho: State, sigma: State, alpha: float, n: int) -> float:
    """-(1/n) log min over tests of (Tr rho^n (I-T))^(alpha/(1-alpha)) + Tr sigma^n T, classical pairs"""
    check_alpha(alpha, allow_above_one=False)
    _check_n(n)
    pair = _classical_pair(rho, sigma)
    if pair is None:
        raise InvalidParameterError("salzmann_datta_finite_n needs a commuting (classical) pair")
    p, q = pair
    k = alpha / (1 - alpha)

    counts, log_mult = type_table(n, p.size)
    lp = sequence_log_probs(counts, p.weights)
    lq = sequence_log_probs(counts, q.weights)
    live = np.isfinite(lp) | np.isfinite(lq)
    lp, lq, log_mult = lp[live], lq[live], log_mult[live]
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isfinite(lq), lp - lq, math.inf)
    order = np.argsort(-ratio, kind="stable")
    mass_p = np.exp(log_mult + lp)[order]
    mass_q = np.exp(log_mult + lq)[order]

    # Walk the Neyman-Pearson frontier from T = 0 (x = 1, y = 0)
    x, y = 1.0, 0.0
    best = 1.0
    for big_p, big_q in zip(mass_p, mass_q):
        x_end = max(x - big_p, 0.0)
        y_end = y + big_q
        best = min(best, x_end ** k + y_end)
        if k > 1 and big_p > 0 and big_q > 0:
            x_star = (big_q / (k * big_p)) ** (1 / (k - 1))
            if x_end < x_star < x:
                y_star = y + (x - x_star) * big_q / big_p
                best = min(best, x_star ** k + y_star)
        x, y = x_end, y_end
    return -math.log(best) / n
