"""Exception hierarchy shared by every module.

Exit-code mapping used by the CLI: DomainError and ValidationError map to
code 1 territory only when surfaced as report violations; a raised
DomainError on bad arguments maps to usage error (2), ResourceBudgetError
to 3.
"""

from __future__ import annotations


class OmegacatError(Exception):
    """Base class for all package errors."""


class DomainError(OmegacatError):
    """An operation was called outside its stated domain."""


class ParseError(OmegacatError):
    """Malformed textual input; carries a 1-based position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self) -> str:  # pragma: no cover - formatting only
        base = super().__str__()
        if self.line:
            return f"{base} (line {self.line}, column {self.col})"
        return base


class ResourceBudgetError(OmegacatError):
    """A configured size or step budget was exhausted."""
