"""Exception types shared across the package."""

from __future__ import annotations


class LneError(Exception):
    """Base class for errors raised by lnegraph."""


class GraphValidationError(LneError):
    """A weighted graph (or graph file) failed one or more structural checks."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "; ".join(str(p) for p in self.problems)
        super().__init__(f"invalid graph: {lines}")


class InvariantViolation(LneError):
    """An internal consistency check failed.

    Raised when two independent derivations of the same quantity disagree in a
    way that cannot be blamed on the input, or when an iteration cap is hit.
    ``diagnostic`` carries whatever state is useful for a bug report.
    """

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic
