"""Exception hierarchy shared across the package."""


class ShapeCurrentsError(Exception):
    """Base class for all package errors."""


class InvalidCurveError(ShapeCurrentsError):
    """Curve data violates the sampled-curve invariants."""


class OutOfDomainError(ShapeCurrentsError):
    """A curve point lies outside the form space's domain."""

    def __init__(self, index, point):
        self.index = index
        self.point = tuple(point)
        super().__init__(f"curve point {index} at {self.point} is outside the domain")


class ConfigurationError(ShapeCurrentsError):
    """Mismatched spaces, bad descriptors, or invalid parameters."""


class AssemblyError(ShapeCurrentsError):
    """Gram assembly produced a matrix that is not symmetric positive definite."""


class NotInGeneralPositionError(ShapeCurrentsError):
    """Occupied-cell pattern is not a discrete topological circle or path."""


class InconsistentJumpsError(ShapeCurrentsError):
    """No segment placement matches the given jumps and edges."""


class InconsistentMomentsError(ShapeCurrentsError):
    """Power-sum moments do not correspond to a real point multiset."""
