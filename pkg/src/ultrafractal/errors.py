"""Exception hierarchy shared across the package."""


class UltrafractalError(Exception):
    """Base class for all package errors."""


class OrdinalParseError(UltrafractalError, ValueError):
    """Raised for malformed or non-normal-form ordinal literals."""


class DomainError(UltrafractalError, ValueError):
    """Raised when an operation precondition is violated."""


class UnaddressablePathError(DomainError):
    """Raised when a node path leaves the tree (child index under a chain node)."""


class NotSuccessorError(DomainError):
    """Raised when a contracting system is requested for a limit scattered height.

    No such system exists for limit heights, so builders refuse instead of
    constructing something that could not satisfy the contraction axioms.
    """


class CapExceededError(UltrafractalError, RuntimeError):
    """Raised when a configured resource cap (levels, net size, word length) is hit."""
