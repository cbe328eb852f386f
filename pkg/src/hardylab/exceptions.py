"""Exception and warning types shared across the package."""


class HardyLabError(Exception):
    """Base class for all package errors."""


class GridError(HardyLabError, ValueError):
    """Invalid grid or sampled data (too small, mismatched, non-finite)."""


class ResolutionError(HardyLabError, ValueError):
    """A grid cannot resolve the requested object (e.g. a high-degree Hermite function)."""


class FitError(HardyLabError, ValueError):
    """A decay or envelope fit had too few usable points."""


class GainOverflowError(HardyLabError, ArithmeticError):
    """Exact rational iterates exceeded the configured bit-length cap."""


class DegenerateAngleError(HardyLabError, ValueError):
    """An angle is too close to a multiple of pi for the requested method."""


class TruncationWarning(UserWarning):
    """Sampled data does not decay to the floor at the grid boundary."""
