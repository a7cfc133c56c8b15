"""Exception types shared across the package."""


class NumradError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(NumradError, ValueError):
    """Vector/operator dimensions do not match the space."""


class DegenerateInputError(NumradError, ValueError):
    """Input is degenerate for the requested operation (e.g. x = 0)."""


class CapabilityError(NumradError, NotImplementedError):
    """The norm/field combination is not supported by this engine."""


class SolverError(NumradError, RuntimeError):
    """An internal LP or eigenvalue solver failed to converge."""
