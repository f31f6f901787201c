"""Exception types shared across the package."""


class ToricError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(ToricError, ValueError):
    """Invalid parameter value (bad domain spec, resolution, alpha range, ...)."""


class PoleConditionError(ToricError):
    """A function is singular somewhere other than the origin corner."""


class GridMismatchError(ToricError):
    """Two sampled functions do not live on the same grid."""


class DimensionError(ToricError):
    """An operation restricted to a fixed dimension was called with another."""


class UndefinedConjugateError(ToricError):
    """Conjugate of a function that is +inf everywhere."""


class ProtocolError(ToricError):
    """A truncation schedule violates the depth/constant coupling."""


class NoLimitError(ToricError):
    """An asymptotic-slope history oscillates instead of stabilizing."""


class DegenerateGeodesicError(ToricError):
    """Geodesic endpoints have no common finite region."""
