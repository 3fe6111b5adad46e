"""
TrajGiST — Error Types
=======================
Every failure raised by the library derives from TrajIndexError so the CLI
can report it uniformly; the subclasses also derive from the closest builtin.
"""

from typing import Optional


class TrajIndexError(Exception):
    """Base class for all library errors."""


class OutOfDomainError(TrajIndexError, ValueError):
    """Timestamp or segment index outside the trajectory's domain."""


class InvalidParameterError(TrajIndexError, ValueError):
    """A split, index or query parameter is out of range."""


class EmptyRestrictionError(TrajIndexError, ValueError):
    """A restriction to a period left nothing to measure."""


class IntegrityError(TrajIndexError, KeyError):
    """Index and store disagree, or a tree invariant is broken."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else ""


class CsvParseError(TrajIndexError, ValueError):
    """Malformed trajectory CSV input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
