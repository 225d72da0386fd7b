"""Exceptions shared across the workbench."""

from __future__ import annotations


class WcloneError(Exception):
    """Base class for workbench errors."""


class CapExceededError(WcloneError):
    """An enumeration would exceed its configured resource cap.

    Carries the exact blowup numbers so callers (and the CLI, exit code 3)
    can report precisely what was attempted.
    """

    def __init__(self, message, **sizes):
        super().__init__(message)
        self.sizes = dict(sizes)

    def __str__(self):
        base = super().__str__()
        if self.sizes:
            detail = ", ".join("%s=%s" % (k, v) for k, v in sorted(self.sizes.items()))
            return "%s (%s)" % (base, detail)
        return base


class ImproperWeightingError(WcloneError):
    """A proper weighting was required but negative weight escapes projections.

    ``violations`` lists the offending (operation, weight) pairs.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class InternalCheckError(WcloneError):
    """A self-verification step failed; indicates a solver bug, never user error."""
