import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.special import comb, gammaln
from scipy.stats import unitary_group

from config import settings
from models.operators import (
    BinaryDistribution,
    ClassicalState,
    DensityMatrix,
    HermitianOperator,
    Test,
    TypeClass,
    TypeDecomposition,
)
from services.errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidOperatorError,
    InvalidParameterError,
    LabelMismatchError,
)

logger = logging.getLogger(__name__)

Operator = Union[HermitianOperator, DensityMatrix, Test]


def _op(x: Operator) -> HermitianOperator:
    return x if isinstance(x, HermitianOperator) else x.op


def _entries(x: Union[Operator, np.ndarray]) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return x
    return _op(x).entries


def default_labels(size: int) -> Tuple[str, ...]:
    return tuple(str(i + 1) for i in range(size))


def hermitian(matrix: Union[np.ndarray, Sequence], tol: Optional[float] = None) -> HermitianOperator:
    """Validate a square matrix as Hermitian and store its symmetrized entries"""
    tol = settings.tolerances.herm if tol is None else tol
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidOperatorError(f"Expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidOperatorError("Matrix has non-finite entries")
    deviation = float(np.max(np.abs(m - m.conj().T)))
    if deviation > tol:
        raise InvalidOperatorError(f"Matrix is not Hermitian: max |A - A^dagger| = {deviation:.3e}")
    return HermitianOperator(entries=(m + m.conj().T) / 2)


def spectral(a: Operator) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian operator"""
    return _op(a).spectrum


def density_matrix(matrix: Union[np.ndarray, Sequence]) -> DensityMatrix:
    """Validate a unit-trace PSD matrix; small negative eigenvalues are clamped to 0"""
    tol = settings.tolerances
    op = hermitian(matrix)
    evals, evecs = op.spectrum
    if evals[0] < -tol.psd:
        raise InvalidOperatorError(f"Matrix is not positive semi-definite: min eigenvalue {evals[0]:.3e}")
    trace = float(np.real(np.trace(op.entries)))
    if abs(trace - 1.0) > tol.trace:
        raise InvalidOperatorError(f"Density matrix must have unit trace, got {trace:.12g}")
    if evals[0] < 0:
        clamped = np.clip(evals, 0.0, None)
        clamped = clamped / clamped.sum()
        logger.debug(f"Clamped eigenvalues down to {evals[0]:.3e} and renormalized")
        op = HermitianOperator(entries=(evecs * clamped) @ evecs.conj().T)
    return DensityMatrix(op=op)


def as_test(matrix: Union[np.ndarray, Sequence, HermitianOperator]) -> Test:
    """Validate 0 <= T <= I"""
    tol = settings.tolerances.test_range
    op = matrix if isinstance(matrix, HermitianOperator) else hermitian(matrix)
    evals, _ = op.spectrum
    if evals[0] < -tol or evals[-1] > 1 + tol:
        raise InvalidOperatorError(
            f"Test eigenvalues must lie in [0, 1], got [{evals[0]:.3e}, {evals[-1]:.3e}]"
        )
    return Test(op=op)


def projection_test(vectors: np.ndarray) -> Test:
    """Projection onto the span of the given orthonormal columns"""
    v = np.asarray(vectors, dtype=complex)
    return Test(op=HermitianOperator(entries=v @ v.conj().T))


def identity_test(dim: int) -> Test:
    return Test(op=HermitianOperator(entries=np.eye(dim, dtype=complex)))


def classical_state(weights: Iterable[float], labels: Optional[Sequence[str]] = None) -> ClassicalState:
    tol = settings.tolerances.classical_sum
    w = np.asarray(list(weights), dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidOperatorError("Classical weights must be a non-empty vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidOperatorError("Classical weights must be finite and non-negative")
    if abs(w.sum() - 1.0) > tol:
        raise InvalidOperatorError(f"Classical weights must sum to 1, got {w.sum():.15g}")
    labels = default_labels(w.size) if labels is None else tuple(str(label) for label in labels)
    if len(labels) != w.size:
        raise InvalidOperatorError(f"{len(labels)} labels for {w.size} weights")
    if len(set(labels)) != len(labels):
        raise InvalidOperatorError("Classical labels must be distinct")
    return ClassicalState(labels=labels, weights=w)


def binary_distribution(p: float) -> BinaryDistribution:
    tol = settings.tolerances.binary_clamp
    if p < -tol or p > 1 + tol:
        raise InvalidOperatorError(f"Binary probability {p:.3e} outside [0, 1]")
    return BinaryDistribution(p=min(max(p, 0.0), 1.0))


def check_same_dim(a: Operator, b: Operator, what: str = "operators") -> None:
    if _op(a).dim != _op(b).dim:
        raise DimensionMismatchError(_op(a).dim, _op(b).dim, what)


def check_same_labels(p: ClassicalState, q: ClassicalState) -> None:
    if p.labels != q.labels:
        raise LabelMismatchError(f"Label sets differ: {p.labels} vs {q.labels}")


def mat_power(a: Operator, x: float) -> HermitianOperator:
    """A^x := sum over eigenvalues a > eps_supp of a^x P_a; x = 0 gives the support projection"""
    tol = settings.tolerances
    evals, evecs = spectral(a)
    if evals[0] < -tol.psd:
        raise InvalidOperatorError(f"mat_power needs a PSD operator, min eigenvalue {evals[0]:.3e}")
    mask = evals > tol.supp
    u = evecs[:, mask]
    powered = evals[mask] ** x
    return HermitianOperator(entries=(u * powered) @ u.conj().T)


def support_projection(a: Operator) -> HermitianOperator:
    return mat_power(a, 0.0)


def apply_test(x: Operator, t: Test) -> Tuple[float, float]:
    """(Tr XT, Tr X(I - T))"""
    check_same_dim(x, t)
    xm = _entries(x)
    accept = np.trace(xm @ t.entries)
    total = np.trace(xm)
    tol = settings.tolerances.supp
    if abs(accept.imag) > tol or abs(total.imag) > tol:
        logger.warning(f"⚠️ Non-negligible imaginary trace residue {accept.imag:.3e}")
    return float(accept.real), float(total.real - accept.real)


def post_test_distribution(rho: DensityMatrix, t: Test) -> BinaryDistribution:
    accept, _ = apply_test(rho, t)
    return binary_distribution(accept)


def tensor_power(rho: DensityMatrix, n: int) -> DensityMatrix:
    """Dense n-fold Kronecker power, limited by the dense budget"""
    if n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n}")
    size = rho.dim ** n
    if size > settings.dense_budget:
        raise BudgetExceededError("dense tensor-power dimension", size, settings.dense_budget)
    m = rho.entries
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return DensityMatrix(op=HermitianOperator(entries=out))


def type_count(n: int, k: int) -> int:
    return int(comb(n + k - 1, k - 1, exact=True))


def compositions(n: int, k: int) -> List[Tuple[int, ...]]:
    """All count vectors of length k summing to n (stars and bars)"""
    out = []
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        counts = []
        prev = -1
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(n + k - 2 - prev)
        out.append(tuple(counts))
    return out


def multinomial(counts: Sequence[int]) -> int:
    total = 0
    result = 1
    for c in counts:
        total += c
        result *= int(comb(total, c, exact=True))
    return result


def type_table(n: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Count matrix (types x k) and log multiplicities for length-n sequences over k symbols"""
    if n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n}")
    count = type_count(n, k)
    if count > settings.type_budget:
        raise BudgetExceededError("number of types", count, settings.type_budget)
    counts = np.array(compositions(n, k), dtype=int).reshape(count, k)
    log_mult = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    return counts, log_mult


def _log_weights(w: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(w)


def sequence_log_probs(counts: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """n * sum_w tau(w) log p(w) per type; -inf when a used symbol has zero mass"""
    log_w = _log_weights(weights)
    used = counts > 0
    terms = np.where(used, counts * np.where(np.isfinite(log_w), log_w, 0.0), 0.0)
    out = terms.sum(axis=1)
    blocked = np.any(used & ~np.isfinite(log_w), axis=1)
    return np.where(blocked, -np.inf, out)


def tensor_power_classical(p: ClassicalState, n: int) -> TypeDecomposition:
    counts, log_mult = type_table(n, p.size)
    log_probs = sequence_log_probs(counts, p.weights)
    types = [
        TypeClass(
            counts=tuple(int(c) for c in row),
            multiplicity=multinomial(row),
            log_multiplicity=float(lm),
            log_prob=float(lp),
        )
        for row, lm, lp in zip(counts, log_mult, log_probs)
    ]
    return TypeDecomposition(n=n, labels=p.labels, types=types)


def classical_tensor_power(p: ClassicalState, n: int) -> ClassicalState:
    """Explicit distribution over all |Omega|^n sequences"""
    size = p.size ** n
    if size > settings.type_budget:
        raise BudgetExceededError("number of sequences", size, settings.type_budget)
    weights = p.weights
    labels: List[Tuple[str, ...]] = [(label,) for label in p.labels]
    for _ in range(n - 1):
        weights = np.outer(weights, p.weights).ravel()
        labels = [prefix + (label,) for prefix in labels for label in p.labels]
    return ClassicalState(labels=tuple(",".join(seq) for seq in labels), weights=weights)


def as_density(p: ClassicalState) -> DensityMatrix:
    return DensityMatrix(op=HermitianOperator(entries=np.diag(p.weights).astype(complex)))


def is_diagonal(rho: Operator, tol: Optional[float] = None) -> bool:
    tol = settings.tolerances.herm if tol is None else tol
    m = _entries(rho)
    off = m - np.diag(np.diag(m))
    return bool(np.max(np.abs(off)) <= tol)


def diagonal_classical(rho: DensityMatrix, labels: Optional[Sequence[str]] = None) -> ClassicalState:
    """Classical state of a diagonal density matrix"""
    if not is_diagonal(rho):
        raise InvalidOperatorError("Density matrix is not diagonal in the standard basis")
    w = np.clip(np.real(np.diag(rho.entries)), 0.0, None)
    return classical_state(w / w.sum(), labels)


def pinch(rho: DensityMatrix, basis: np.ndarray) -> DensityMatrix:
    """Rank-one pinching sum_j |v_j><v_j| rho |v_j><v_j| in an orthonormal basis"""
    diag = np.real(np.einsum("ij,ik,kj->j", basis.conj(), rho.entries, basis))
    diag = np.clip(diag, 0.0, None)
    diag = diag / diag.sum()
    return DensityMatrix(op=HermitianOperator(entries=(basis * diag) @ basis.conj().T))


def trace_distance(rho: Operator, sigma: Operator) -> float:
    check_same_dim(rho, sigma)
    evals = scipy.linalg.eigvalsh(_entries(rho) - _entries(sigma))
    return float(0.5 * np.abs(evals).sum())


def random_density(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Ginibre-distributed state of the given rank (full rank by default)"""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return density_matrix(m / np.real(np.trace(m)))


def random_classical(size: int, rng: np.random.Generator) -> ClassicalState:
    w = rng.dirichlet(np.ones(size))
    return classical_state(w / w.sum())


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim == 1:
        return np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(dim, random_state=rng)
