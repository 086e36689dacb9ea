"""Exception types shared across the package."""

from __future__ import annotations


class DeloopError(Exception):
    """Base class for all package errors."""


class InvalidArrow(DeloopError):
    """An arrow name is unknown, duplicated, or a path is not composable."""


class NonGradedRelation(DeloopError):
    """A relation mixes path lengths, is not parallel, or has length < 2."""


class NotAdmissible(DeloopError):
    """Basis construction did not terminate below the degree cap."""


class CharTooSmall(DeloopError):
    """Trace-form radical needs char 0 or p > dim End."""


class NoSplitFound(DeloopError):
    """Idempotent search exhausted its budget without splitting or certifying."""


class MethodUnavailable(DeloopError):
    """Requested decision method does not support these parameters."""


class GraphTruncated(DeloopError):
    """Syzygy graph hit a cap; the requested answer is unknown."""


class NotExact(DeloopError):
    """A sequence failed the exactness check."""

    def __init__(self, joint: int, message: str = ""):
        self.joint = joint
        super().__init__(message or f"sequence not exact at joint {joint}")


class NotMonomial(DeloopError):
    """Operation requires a monomial algebra."""


class ConditionsFail(DeloopError):
    """Finitistic-dimension criterion is inconclusive for this algebra."""


class ParseError(DeloopError):
    """Text format error, with position information."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = "" if line is None else f" (line {line}" + ("" if col is None else f", col {col}") + ")"
        super().__init__(message + where)


class ValidationError(DeloopError):
    """Parsed object violates a structural constraint."""
