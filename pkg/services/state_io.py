import json
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from models.operators import ClassicalState, DensityMatrix
from services.divergence_core import State, coerce_pair
from services.errors import RenyiError, StateFileError, UsageError
from services.operator_core import classical_state, density_matrix, diagonal_classical

logger = logging.getLogger(__name__)

ComplexEntry = Tuple[float, float]


class DensityFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["density"]
    dim: int = Field(gt=0)
    matrix: List[List[ComplexEntry]]

    @model_validator(mode="after")
    def check_shape(self) -> "DensityFile":
        if len(self.matrix) != self.dim or any(len(row) != self.dim for row in self.matrix):
            raise ValueError(f"matrix must be {self.dim}x{self.dim}")
        return self


class ClassicalFile(BaseModel):
    """Classical state given by weights (and labels) or by a diagonal matrix"""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["classical"]
    weights: Optional[List[float]] = None
    labels: Optional[List[str]] = None
    dim: Optional[int] = Field(default=None, gt=0)
    matrix: Optional[List[List[ComplexEntry]]] = None

    @model_validator(mode="after")
    def check_source(self) -> "ClassicalFile":
        if (self.weights is None) == (self.matrix is None):
            raise ValueError("exactly one of 'weights' or 'matrix' is required")
        return self


StateFile = Annotated[Union[DensityFile, ClassicalFile], Field(discriminator="kind")]
_adapter = TypeAdapter(StateFile)


def _to_matrix(rows: List[List[ComplexEntry]]) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def _from_matrix(m: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def read_state(path: Union[str, Path]) -> State:
    """Parse a state file; all failures surface as StateFileError with line or field context"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise StateFileError(path, f"cannot read file: {e.strerror}") from e

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise StateFileError(path, e.msg, line=e.lineno) from e

    try:
        parsed = _adapter.validate_python(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        raise StateFileError(path, first["msg"], field=field) from e

    try:
        if isinstance(parsed, DensityFile):
            state: State = density_matrix(_to_matrix(parsed.matrix))
        elif parsed.weights is not None:
            state = classical_state(parsed.weights, parsed.labels)
        else:
            state = diagonal_classical(density_matrix(_to_matrix(parsed.matrix)), parsed.labels)
    except RenyiError as e:
        field = "matrix" if isinstance(parsed, DensityFile) or parsed.matrix is not None else "weights"
        raise StateFileError(path, str(e), field=field) from e

    logger.debug(f"Loaded {parsed.kind} state from {path}")
    return state


def write_state(path: Union[str, Path], state: State) -> None:
    """Write a state file; floats use the shortest repr that round-trips exactly"""
    if isinstance(state, ClassicalState):
        payload = {"kind": "classical", "weights": [float(w) for w in state.weights], "labels": list(state.labels)}
    else:
        payload = {"kind": "density", "dim": state.dim, "matrix": _from_matrix(state.entries)}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_pair(paths: Sequence[Path]) -> Tuple[State, State]:
    if len(paths) != 2:
        raise UsageError(f"Exactly two --input files are required, got {len(paths)}")
    rho, sigma = (read_state(p) for p in paths)
    return coerce_pair(rho, sigma)


def require_classical(rho: State, sigma: State) -> Tuple[ClassicalState, ClassicalState]:
    """Classical pair, converting diagonal density matrices"""
    rho, sigma = coerce_pair(rho, sigma)
    if isinstance(rho, ClassicalState):
        return rho, sigma
    if isinstance(rho, DensityMatrix):
        try:
            return diagonal_classical(rho), diagonal_classical(sigma)
        except RenyiError:
            pass
    raise UsageError(
        "This command needs classical (commuting, diagonal) inputs; use 'hoeffding-test' for dense "
        "n-copy computations on quantum states"
    )
