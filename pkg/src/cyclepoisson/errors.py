"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "CyclePoissonError",
    "ValidationError",
    "GuardError",
    "CoverageError",
    "TableFormatError",
    "ToleranceNotMetError",
]


class CyclePoissonError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CyclePoissonError, ValueError):
    """Invalid argument or domain violation."""


class GuardError(ValidationError):
    """An enumeration budget guard tripped (input too large to enumerate)."""


class CoverageError(ValidationError):
    """A table or window does not cover the indices a computation needs."""

    def __init__(self, message: str, missing=None):
        super().__init__(message)
        self.missing = missing


class TableFormatError(ValidationError):
    """A table file failed validation; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else "line %d: %s" % (line, message))
        self.line = line


class ToleranceNotMetError(CyclePoissonError):
    """Iteration hit its budget before reaching tolerance.

    Carries the best estimate so callers can still inspect it.
    """

    def __init__(self, message: str, best_value=None, error_estimate=None, nodes=None):
        super().__init__(message)
        self.best_value = best_value
        self.error_estimate = error_estimate
        self.nodes = nodes
