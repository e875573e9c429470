"""Shared exception types."""

from __future__ import annotations


class GeometryError(ValueError):
    """Degenerate geometric input (zero determinant, degenerate circle, ...)."""


class PartitionError(ValueError):
    """A region list does not form a valid partition of the sphere."""


class SceneError(ValueError):
    """A scene file or scene dictionary failed validation."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")


class TruncationError(RuntimeError):
    """A hard budget (arcs per stratum, group words, ...) was exceeded.

    Carries the offending level/size so callers can report exactly where
    the computation was cut off instead of silently dropping data.
    """

    def __init__(self, what: str, level: int, count: int, budget: int):
        self.what = what
        self.level = level
        self.count = count
        self.budget = budget
        super().__init__(f"{what} budget exceeded at level {level}: {count} > {budget}")
