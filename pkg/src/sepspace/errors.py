"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad dimension, unnormalized vector, ...)."""


class UnsupportedDimensionError(InputError):
    """A construction was requested for a dimension it does not cover."""


class PreconditionError(InputError):
    """An operation's documented precondition does not hold for the given data."""


class ConvergenceError(RuntimeError):
    """An iterative routine gave up before converging."""
