"""Shared exception types."""


class VerificationError(RuntimeError):
    """An internal consistency check failed; the result cannot be trusted."""
