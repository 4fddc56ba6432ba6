"""
Custom exceptions for the perfect matching lattice toolkit.
Provides structured error handling with stable CLI exit codes.
"""
from typing import Any


class LatticeException(Exception):
    """Base exception for lattice construction errors."""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class GraphFormatError(LatticeException):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(
            f"line {line}: {message}" if line is not None else message,
            {"line": line},
        )
        self.line = line


class NotMatchingCoveredError(LatticeException):
    """Raised when an algorithm needs a matching covered graph and does not get one."""

    def __init__(self, message: str, uncovered: tuple[int, ...] = ()):
        super().__init__(message, {"uncovered_edges": list(uncovered)})
        self.uncovered = uncovered


class NoPerfectMatchingError(LatticeException):
    """Raised when a graph has no perfect matching at all."""
    pass


class EnumerationOverflowError(LatticeException):
    """Raised when brute-force enumeration exceeds its cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} perfect matchings", {"cap": cap})
        self.cap = cap


class PreconditionError(LatticeException):
    """Raised when an operation is called outside its documented domain."""
    pass


class InvariantViolation(LatticeException):
    """Raised when an asserted mathematical invariant does not hold."""
    pass


class CutSearchError(LatticeException):
    """Raised when the robust cut search cannot make progress."""

    def __init__(self, message: str, history: list[dict[str, Any]] | None = None):
        super().__init__(message, {"history": history or []})
        self.history = history or []


class UnsupportedInstanceError(LatticeException):
    """Raised when the facet descent is stuck without a fractional certificate."""
    pass


class VerificationFailure(LatticeException):
    """Raised when an oracle check fails."""
    pass


# ─────────────────────────────────────────────────────────────────
# Exit code factory
# ─────────────────────────────────────────────────────────────────

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_COVERED = 3
EXIT_VERIFICATION = 4
EXIT_DIAGNOSTIC = 5


def exit_code_for(exc: LatticeException) -> int:
    """Map an exception to the CLI exit-code contract."""
    if isinstance(exc, GraphFormatError):
        return EXIT_PARSE
    if isinstance(exc, (NotMatchingCoveredError, NoPerfectMatchingError)):
        return EXIT_NOT_COVERED
    if isinstance(exc, VerificationFailure):
        return EXIT_VERIFICATION
    return EXIT_DIAGNOSTIC
