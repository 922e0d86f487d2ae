class GeometryError(ValueError):
    """Invalid geometric input or a violated precondition."""


class DegenerateError(GeometryError):
    pass


class NotOnBoundaryError(GeometryError):
    pass


class NormalizationError(GeometryError):
    """The origin is not interior to the body."""


class AntipodalPairError(GeometryError):
    """Two points are antipodal, so no single direction illuminates both."""


class NoSubunitCoverError(ValueError):
    """The given centers need a ratio above 1 to cover the body."""

    def __init__(self, message, gamma_lower=None):
        super().__init__(message)
        self.gamma_lower = gamma_lower


class LpStallError(RuntimeError):
    """The simplex method failed to terminate cleanly."""
