from functools import cached_property
from pydantic import BaseModel, ConfigDict
from typing import List, Tuple
import numpy as np
import scipy.linalg


class HermitianOperator(BaseModel):
    """Dense Hermitian matrix with a lazily computed spectral decomposition.

    Build instances through services.operator_core.hermitian so the
    Hermiticity check runs; the model itself only stores the entries.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @cached_property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and orthonormal eigenvectors (columns)"""
        evals, evecs = scipy.linalg.eigh(self.entries)
        return evals, evecs


class DensityMatrix(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    op: HermitianOperator

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    @property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.op.spectrum


class Test(BaseModel):
    """Operator T with 0 <= T <= I; the two-outcome measurement (T, I - T)"""
    __test__ = False  # not a pytest class

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    op: HermitianOperator

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries


class ClassicalState(BaseModel):
    """Probability vector over an ordered label set"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    labels: Tuple[str, ...]
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def support(self) -> np.ndarray:
        return self.weights > 0


class BinaryDistribution(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float

    @property
    def complement(self) -> float:
        return 1.0 - self.p


class TypeClass(BaseModel):
    """Sequences of length n sharing one empirical distribution"""
    model_config = ConfigDict(frozen=True)

    counts: Tuple[int, ...]
    multiplicity: int
    log_multiplicity: float
    log_prob: float  # per-sequence log-probability


class TypeDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    labels: Tuple[str, ...]
    types: List[TypeClass]

    @property
    def total_multiplicity(self) -> int:
        return sum(t.multiplicity for t in self.types)
