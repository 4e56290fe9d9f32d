from typing import Optional
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class RenyiError(Exception):
    """Base class for every error raised by the services"""
    exit_code: int = EXIT_USAGE


class UsageError(RenyiError, ValueError):
    """Invalid command-line usage or configuration"""


class InvalidOperatorError(RenyiError, ValueError):
    """Matrix fails the Hermitian, PSD, trace or test-range checks"""


class NotAProjectionError(InvalidOperatorError):
    """Operator is not idempotent within tolerance"""


class DimensionMismatchError(RenyiError, ValueError):
    def __init__(self, left: int, right: int, what: str = "operators"):
        self.left = left
        self.right = right
        super().__init__(f"Dimension mismatch between {what}: {left} vs {right}")


class LabelMismatchError(RenyiError, ValueError):
    """Classical states defined over different label sets"""


class InvalidParameterError(RenyiError, ValueError):
    """Parameter (alpha, r, n, overlap) outside its domain"""


class BudgetExceededError(RenyiError):
    def __init__(self, what: str, count: int, budget: int):
        self.what = what
        self.count = count
        self.budget = budget
        super().__init__(f"{what}: {count} exceeds the configured budget of {budget}")


class StateFileError(RenyiError, ValueError):
    def __init__(self, path: Path, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.path = path
        self.line = line
        self.field = field
        context = []
        if line is not None:
            context.append(f"line {line}")
        if field:
            context.append(f"field '{field}'")
        where = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{path}{where}: {message}")


class NumericInvariantError(RenyiError):
    """A computed quantity violates a mathematical invariant"""
    exit_code = EXIT_NUMERIC


class BracketError(NumericInvariantError):
    def __init__(self, lo: float, hi: float, g_lo: float, g_hi: float):
        self.lo = lo
        self.hi = hi
        self.g_lo = g_lo
        self.g_hi = g_hi
        super().__init__(
            f"Root bracket [{lo:.12g}, {hi:.12g}] has no sign change: "
            f"G(lo)={g_lo:.6g}, G(hi)={g_hi:.6g}"
        )
