"""Exceptions shared across the package."""


class GroupTooLargeError(RuntimeError):
    """Raised when a resource guard trips (enumeration cap, matrix size cap)."""


class InvariantError(RuntimeError):
    """An internal cross-check failed; signals a bug, not a user error."""
