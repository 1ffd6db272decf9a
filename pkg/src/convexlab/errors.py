"""Exception hierarchy shared by all convexlab modules."""


class ConvexLabError(Exception):
    """Base class for all library errors."""


class InvalidDimensionError(ConvexLabError, ValueError):
    pass


class DimensionMismatchError(ConvexLabError, ValueError):
    pass


class DomainError(ConvexLabError, ValueError):
    pass


class MultivaluedError(ConvexLabError):
    """The subdifferential at the requested direction is not a singleton.

    ``points`` holds the tied support points (e.g. the vertices of a facet).
    """

    def __init__(self, message, points):
        super().__init__(message)
        self.points = points


class NoHessianError(ConvexLabError):
    pass


class ConvexityError(ConvexLabError):
    pass


class SingularReferenceError(ConvexLabError):
    pass


class UnsupportedMethodError(ConvexLabError):
    pass


class ConstructionFailedError(ConvexLabError):
    pass


class NotARevolutionBodyError(ConvexLabError):
    pass


class BodySpecError(ConvexLabError, ValueError):
    """Malformed body spec document; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
