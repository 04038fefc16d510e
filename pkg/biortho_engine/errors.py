"""
Error Types for the Biortho Engine
"""

from typing import Optional, Sequence, Tuple


class BiorthoError(Exception):
    """Base class for every error raised by the engine."""


class DomainError(BiorthoError, ValueError):
    """A parameter or point lies outside its admissible domain."""


class ConfigurationError(BiorthoError, ValueError):
    """Bad environment override or defaults file content."""


class EvaluationError(BiorthoError, ArithmeticError):
    """A series produced a non-finite term."""

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (term index {index})")
        self.index = index


class AccuracyError(BiorthoError):
    """A series or quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, terms: Optional[int] = None):
        super().__init__(f"{message} (best estimate {estimate!r})")
        self.estimate = estimate
        self.terms = terms


class SingularityError(BiorthoError, ZeroDivisionError):
    """A Cauchy system has duplicate nodes or a vanishing denominator."""

    def __init__(self, message: str, indices: Sequence[Tuple[str, int, int]]):
        super().__init__(message)
        self.indices = list(indices)


class DecompositionError(BiorthoError, ArithmeticError):
    """A leading principal minor vanished during Gauss decomposition."""

    def __init__(self, message: str, order: int):
        super().__init__(f"{message} (order {order})")
        self.order = order


def require(condition: bool, message: str):
    """Raise DomainError with message unless condition holds."""
    if not condition:
        raise DomainError(message)


def check_parameters(alpha: float, theta: float, n: Optional[int] = None):
    """Validate the (alpha, theta[, n]) triple shared by every family."""
    require(alpha == alpha and alpha > -1, "alpha must be > -1")
    require(theta == theta and theta > 0 and theta != float("inf"), "theta must be > 0")
    if n is not None:
        require(int(n) == n and n >= 1, "n must be a positive integer")
