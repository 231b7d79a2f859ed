"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """An internal identity that is a theorem failed to hold.

    Raised when, e.g., a division guaranteed exact leaves a remainder.
    Seeing this exception indicates a bug, not bad input.
    """
