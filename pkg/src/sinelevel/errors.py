"""Exception types shared across the package."""

from __future__ import annotations


class SineLevelError(Exception):
    """Base class for all package-specific errors."""


class EvaluationError(SineLevelError):
    """A user-supplied function could not be evaluated.

    Carries the offending point (when known) so solver-level callers can
    report where evaluation broke down.
    """

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class ExpressionError(SineLevelError):
    """Base class for expression-language failures."""


class ExpressionSyntaxError(ExpressionError):
    """Source text could not be parsed; ``offset`` is a byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExpressionDomainError(ExpressionError, EvaluationError):
    """Evaluating an expression hit a domain fault (log of a negative,
    division by zero, overflow, ...). Names the offending subexpression."""

    def __init__(self, message: str, subexpr: str, point=None):
        EvaluationError.__init__(self, f"{message} in `{subexpr}`", point)
        self.subexpr = subexpr


class ProblemFormatError(SineLevelError):
    """A problem document violates the file schema; ``path`` locates the
    offending field (e.g. ``box[2][0]`` or ``params.t``)."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class AllStartsFailedError(EvaluationError):
    """Every start of a multistart run failed to evaluate."""

    def __init__(self, failures):
        lines = "; ".join(f"start {i}: {msg}" for i, msg in failures)
        super().__init__(f"all {len(failures)} starts failed: {lines}")
        self.failures = list(failures)
