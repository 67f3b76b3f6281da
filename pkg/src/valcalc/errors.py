"""Exception hierarchy shared by every valcalc module."""

from __future__ import annotations


class ValcalcError(Exception):
    """Base class for library errors."""


class ValidationError(ValcalcError, ValueError):
    """Malformed input: bad JSON, mismatched dimensions, invalid arguments."""


class CapError(ValcalcError):
    """A configured size or dimension limit was exceeded."""

    def __init__(self, cap: str, limit: int, value: int | None = None, what: str = ""):
        self.cap = cap
        self.limit = limit
        self.value = value
        msg = f"cap {cap}={limit} exceeded"
        if value is not None:
            msg += f" (got {value})"
        if what:
            msg += f": {what}"
        super().__init__(msg)


class InvariantError(ValcalcError):
    """An internal consistency check failed; indicates a bug, never bad input."""


class RefinementError(ValcalcError):
    """Common refinement of polyhedral complexes did not converge."""
