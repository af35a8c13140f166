"""Exception types shared across the package."""

from __future__ import annotations


class RGroupsError(Exception):
    """Base class for all package errors."""


class InstanceSyntaxError(RGroupsError):
    """The instance document is not well-formed JSON."""


class SchemaError(RGroupsError):
    """The instance document has missing, extra, or mistyped fields."""


class ValidationError(RGroupsError):
    """A structurally sound instance violates a named invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class IndexOutOfRange(RGroupsError):
    """A block index is outside 1..r."""


class RankMismatch(RGroupsError):
    """Two group elements act on different numbers of blocks."""


class CapExceeded(RGroupsError):
    """An exhaustive computation was requested above its size cap."""


class FamilyMismatch(RGroupsError):
    """An operation was invoked for a group family it does not cover."""


class NotElliptic(RGroupsError):
    """A sub-R-group operation was requested for a non-elliptic instance."""


class UnknownExample(RGroupsError):
    """No bundled instance has the requested name."""
