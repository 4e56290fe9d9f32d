import logging
import math
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from config import settings
from models.operators import ClassicalState, DensityMatrix
from models.profile import PsiProfile
from models.results import DivergenceValue, EqualityCase, Family, PureStatePanel
from services.errors import InvalidParameterError
from services.operator_core import (
    as_density,
    check_same_dim,
    check_same_labels,
    mat_power,
    support_projection,
)

logger = logging.getLogger(__name__)

State = Union[DensityMatrix, ClassicalState]


def coerce_pair(rho: State, sigma: State) -> Tuple[State, State]:
    """Both classical (same labels) or both density matrices of equal dimension"""
    if isinstance(rho, ClassicalState) and isinstance(sigma, ClassicalState):
        check_same_labels(rho, sigma)
        return rho, sigma
    if isinstance(rho, ClassicalState):
        rho = as_density(rho)
    if isinstance(sigma, ClassicalState):
        sigma = as_density(sigma)
    check_same_dim(rho, sigma, "states")
    return rho, sigma


def as_density_pair(rho: State, sigma: State) -> Tuple[DensityMatrix, DensityMatrix]:
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        return as_density(rho), as_density(sigma)
    return rho, sigma


def check_alpha(alpha: float, allow_above_one: bool = True) -> None:
    if not np.isfinite(alpha) or alpha <= 0 or alpha == 1:
        raise InvalidParameterError(f"alpha must be positive and different from 1, got {alpha}")
    if alpha > 1 and not allow_above_one:
        raise InvalidParameterError(f"alpha must lie in (0,1), got {alpha}")


def _psi_flat(log_r: np.ndarray, log_s: np.ndarray, log_w: np.ndarray, alpha: float) -> float:
    if log_r.size == 0:
        return -math.inf
    return float(logsumexp(alpha * log_r + (1 - alpha) * log_s + log_w))


def _classical_spectra(p: ClassicalState, q: ClassicalState):
    supp = settings.tolerances.supp
    rmask = p.weights > supp
    smask = q.weights > supp
    r = p.weights[rmask]
    s = q.weights[smask]
    idx_r = np.flatnonzero(rmask)
    idx_s = np.flatnonzero(smask)
    W = (idx_r[:, None] == idx_s[None, :]).astype(float)
    identical = bool(np.max(np.abs(p.weights - q.weights)) <= supp)
    supp_rho_le_sigma = bool(p.weights[~smask].sum() <= settings.tolerances.support_inclusion)
    supp_sigma_le_rho = bool(q.weights[~rmask].sum() <= settings.tolerances.support_inclusion)
    return r, s, W, identical, supp_rho_le_sigma, supp_sigma_le_rho


def _outside_support_norm(x: DensityMatrix, y: DensityMatrix) -> float:
    """||(I - y^0) x (I - y^0)|| in operator norm"""
    complement = np.eye(y.dim) - support_projection(y).entries
    m = complement @ x.entries @ complement
    return float(scipy.linalg.norm(m, 2))


def _quantum_spectra(rho: DensityMatrix, sigma: DensityMatrix):
    tol = settings.tolerances
    r_vals, r_vecs = rho.spectrum
    s_vals, s_vecs = sigma.spectrum
    rmask = r_vals > tol.supp
    smask = s_vals > tol.supp
    overlap = r_vecs[:, rmask].conj().T @ s_vecs[:, smask]
    W = np.abs(overlap) ** 2
    identical = bool(np.max(np.abs(rho.entries - sigma.entries)) <= tol.supp)
    supp_rho_le_sigma = _outside_support_norm(rho, sigma) <= tol.support_inclusion
    supp_sigma_le_rho = _outside_support_norm(sigma, rho) <= tol.support_inclusion
    return r_vals[rmask], s_vals[smask], W, identical, supp_rho_le_sigma, supp_sigma_le_rho


def build_psi(rho: State, sigma: State) -> PsiProfile:
    """Eigenvalues and overlap weights of (rho, sigma) for every psi evaluation"""
    tol = settings.tolerances
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        r, s, W, identical, rho_le, sigma_le = _classical_spectra(rho, sigma)
    else:
        r, s, W, identical, rho_le, sigma_le = _quantum_spectra(rho, sigma)

    ii, jj = np.nonzero(W > 0)
    log_r = np.log(r[ii])
    log_s = np.log(s[jj])
    log_w = np.log(W[ii, jj])
    overlap = float(np.sum(r[ii] * s[jj] * W[ii, jj]))
    orthogonal = overlap <= tol.orthogonal

    psi_affine = False
    kappa = eta = None
    if not orthogonal:
        grid = np.linspace(0.0, 1.0, settings.psi_grid_points)
        values = np.array([_psi_flat(log_r, log_s, log_w, a) for a in grid])
        chord = values[0] + grid * (values[-1] - values[0])
        psi_affine = bool(np.max(np.abs(values - chord)) < tol.affine)
        if psi_affine and abs(values[-1]) <= tol.affine:
            kappa = math.exp(-values[0])
        if psi_affine and abs(values[0]) <= tol.affine:
            eta = math.exp(-values[-1])

    return PsiProfile(
        r=r,
        s=s,
        W=W,
        log_r=log_r,
        log_s=log_s,
        log_w=log_w,
        identical=identical,
        orthogonal=orthogonal,
        supp_rho_le_sigma=rho_le,
        supp_sigma_le_rho=sigma_le,
        psi_affine=psi_affine,
        kappa=kappa,
        eta=eta,
    )


def psi_at(profile: PsiProfile, alpha: float) -> float:
    """psi(alpha) = log Tr rho^alpha sigma^(1-alpha); -inf for orthogonal pairs"""
    if profile.orthogonal:
        return -math.inf
    return _psi_flat(profile.log_r, profile.log_s, profile.log_w, alpha)


def psi_prime_at(profile: PsiProfile, alpha: float) -> float:
    if profile.orthogonal:
        return math.inf
    x = alpha * profile.log_r + (1 - alpha) * profile.log_s + profile.log_w
    weights = np.exp(x - logsumexp(x))
    return float(np.sum(weights * profile.log_ratio))


def psi_increment(profile: PsiProfile, beta: float) -> float:
    """psi(beta) - psi(0) without cancellation for small beta"""
    x0 = profile.log_s + profile.log_w
    w0 = np.exp(x0 - logsumexp(x0))
    return float(np.log1p(np.sum(w0 * np.expm1(beta * profile.log_ratio))))


def psi_tilde(profile: PsiProfile, u: float) -> float:
    """(1 - u) psi(1 / (1 - u)) for u <= 0"""
    return (1 - u) * psi_at(profile, 1 / (1 - u))


def classical_divergence(p: np.ndarray, q: np.ndarray, alpha: float) -> float:
    """Classical Renyi divergence of two probability vectors; alpha = 1 gives the relative entropy"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    both = (p > 0) & (q > 0)
    escapes = bool(np.any((p > 0) & (q <= 0)))
    if alpha == 1:
        if escapes:
            return math.inf
        return float(np.sum(p[both] * (np.log(p[both]) - np.log(q[both]))))
    if alpha > 1 and escapes:
        return math.inf
    if not np.any(both):
        return math.inf
    log_q_alpha = logsumexp(alpha * np.log(p[both]) + (1 - alpha) * np.log(q[both]))
    return float(log_q_alpha / (alpha - 1))


def standard_renyi(
    rho: State, sigma: State, alpha: float, profile: Optional[PsiProfile] = None
) -> DivergenceValue:
    check_alpha(alpha)
    profile = build_psi(rho, sigma) if profile is None else profile
    if profile.orthogonal or (alpha > 1 and not profile.supp_rho_le_sigma):
        value = math.inf
    else:
        value = psi_at(profile, alpha) / (alpha - 1)
    return DivergenceValue(value=value, family=Family.STANDARD, alpha=alpha)


def _commuting(rho: State, sigma: State) -> bool:
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        return True
    a, b = rho.entries, sigma.entries
    return bool(scipy.linalg.norm(a @ b - b @ a, 2) <= settings.tolerances.herm)


def _jacobi_singular_values(x: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Singular values of x by one-sided Jacobi rotations, in descending order.

    Keeps relative precision for a well-conditioned matrix with arbitrarily
    graded columns.
    """
    x = np.array(x, dtype=complex)
    eps = np.finfo(float).eps
    n = x.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                a = float(np.vdot(x[:, i], x[:, i]).real)
                b = float(np.vdot(x[:, j], x[:, j]).real)
                c = complex(np.vdot(x[:, i], x[:, j]))
                if c == 0 or abs(c) <= eps * math.sqrt(a) * math.sqrt(b):
                    continue
                rotated = True
                zeta = (b - a) / (2 * abs(c))
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                cs = 1 / math.hypot(1.0, t)
                sn = cs * t
                xi = x[:, i].copy()
                xj = x[:, j] * (c.conjugate() / abs(c))
                x[:, i] = cs * xi - sn * xj
                x[:, j] = sn * xi + cs * xj
        if not rotated:
            break
    return np.sort(np.linalg.norm(x, axis=0))[::-1]


def sandwich_singular_values(rho: DensityMatrix, sigma: DensityMatrix, power: float) -> np.ndarray:
    """Nonzero singular values of sigma^(power/2) rho^(1/2), powers taken on the supports.

    Their number is the rank of rho^0 sigma^0 rho^0, read off the overlap of the
    two supports rather than from the size of the singular values.
    """
    tol = settings.tolerances
    r_vals, r_vecs = rho.spectrum
    s_vals, s_vecs = sigma.spectrum
    rmask = r_vals > tol.supp
    smask = s_vals > tol.supp
    overlap = s_vecs[:, smask].conj().T @ r_vecs[:, rmask]
    if overlap.size == 0:
        return np.zeros(0)
    rank = int(np.sum(scipy.linalg.svdvals(overlap) > tol.support_inclusion))
    x = np.sqrt(r_vals[rmask])[:, None] * overlap.conj().T * (s_vals[smask] ** (power / 2))[None, :]
    return _jacobi_singular_values(x)[:rank]


def sandwiched_renyi(
    rho: State, sigma: State, alpha: float, profile: Optional[PsiProfile] = None
) -> DivergenceValue:
    check_alpha(alpha)
    profile = build_psi(rho, sigma) if profile is None else profile
    if profile.orthogonal or (alpha > 1 and not profile.supp_rho_le_sigma):
        return DivergenceValue(value=math.inf, family=Family.SANDWICHED, alpha=alpha)
    if _commuting(rho, sigma):
        value = psi_at(profile, alpha) / (alpha - 1)
        return DivergenceValue(value=value, family=Family.SANDWICHED, alpha=alpha)

    rho_d, sigma_d = as_density_pair(rho, sigma)
    sv = sandwich_singular_values(rho_d, sigma_d, (1 - alpha) / alpha)
    if sv.size == 0 or sv[0] == 0:
        return DivergenceValue(value=math.inf, family=Family.SANDWICHED, alpha=alpha)
    sv = sv[sv > 0]
    value = float(logsumexp(2 * alpha * np.log(sv)) / (alpha - 1))
    return DivergenceValue(value=value, family=Family.SANDWICHED, alpha=alpha)


def relative_entropy_value(profile: PsiProfile) -> float:
    """sum_ij r_i W_ij (log r_i - log s_j), or +inf unless supp rho <= supp sigma"""
    if profile.orthogonal or not profile.supp_rho_le_sigma:
        return math.inf
    mass = np.exp(profile.log_r + profile.log_w)
    return float(np.sum(mass * profile.log_ratio))


def relative_entropy(rho: State, sigma: State, profile: Optional[PsiProfile] = None) -> DivergenceValue:
    profile = build_psi(rho, sigma) if profile is None else profile
    return DivergenceValue(value=relative_entropy_value(profile), family=Family.RELATIVE_ENTROPY)


def d_zero(rho: State, sigma: State, profile: Optional[PsiProfile] = None) -> DivergenceValue:
    profile = build_psi(rho, sigma) if profile is None else profile
    value = math.inf if profile.orthogonal else -psi_at(profile, 0.0)
    return DivergenceValue(value=value, family=Family.D0)


def d_max(rho: State, sigma: State, profile: Optional[PsiProfile] = None) -> DivergenceValue:
    """log of the largest eigenvalue of sigma^(-1/2) rho sigma^(-1/2) on supp sigma"""
    profile = build_psi(rho, sigma) if profile is None else profile
    if profile.orthogonal or not profile.supp_rho_le_sigma:
        return DivergenceValue(value=math.inf, family=Family.DMAX)
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        both = (rho.weights > 0) & (sigma.weights > 0)
        value = float(np.max(np.log(rho.weights[both]) - np.log(sigma.weights[both])))
        return DivergenceValue(value=value, family=Family.DMAX)
    s_inv_half = mat_power(sigma, -0.5).entries
    m = s_inv_half @ rho.entries @ s_inv_half
    lam_max = scipy.linalg.eigvalsh((m + m.conj().T) / 2)[-1]
    return DivergenceValue(value=float(np.log(lam_max)), family=Family.DMAX)


def fidelity(rho: State, sigma: State) -> float:
    """F = ||sigma^(1/2) rho^(1/2)||_1, clipped to [0, 1]"""
    rho_d, sigma_d = as_density_pair(rho, sigma)
    return float(min(np.sum(sandwich_singular_values(rho_d, sigma_d, 1.0)), 1.0))


def pure_state_panel(overlap_sq: float, alpha: float) -> PureStatePanel:
    """Closed forms for two pure states with |<psi, phi>|^2 = overlap_sq"""
    if not 0 < overlap_sq < 1:
        raise InvalidParameterError(f"overlap_sq must lie in (0,1), got {overlap_sq}")
    check_alpha(alpha, allow_above_one=False)
    log_c = math.log(overlap_sq)
    # alpha = 1/2 takes the first branch; both agree there
    measured = -log_c if alpha <= 0.5 else alpha / (alpha - 1) * log_c
    return PureStatePanel(
        overlap_sq=overlap_sq,
        alpha=alpha,
        standard=log_c / (alpha - 1),
        sandwiched=alpha / (alpha - 1) * log_c,
        measured=measured,
    )


def petz_degenerate_case(profile: PsiProfile) -> EqualityCase:
    """Case a: rho = kappa * sigma on a sub-support; case b: sigma = eta * rho on a sub-support"""
    if not profile.psi_affine:
        return EqualityCase.NEITHER
    if profile.kappa is not None:
        return EqualityCase.CASE_A
    if profile.eta is not None:
        return EqualityCase.CASE_B
    return EqualityCase.NEITHER
