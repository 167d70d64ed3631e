"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input: non-unit axis, malformed table, unnormalized weights, ..."""


class InvariantError(RuntimeError):
    """A computed result broke an identity it is required to satisfy."""
