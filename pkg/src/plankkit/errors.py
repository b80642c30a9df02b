"""Exception hierarchy shared by every module.

The CLI reports ``type(err).__name__`` so the class names double as the
error vocabulary of the JSON reports.
"""


class GeometryError(Exception):
    """Base class for all library errors."""


class InvalidBody(GeometryError):
    """Input does not describe a bounded convex set with non-empty interior."""


class UnboundedBody(InvalidBody):
    pass


class DegenerateHull(InvalidBody):
    pass


class InvalidDirection(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class RepresentationUnavailable(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class EmptyResult(GeometryError):
    """Raised when a construction yields the empty set.

    ``certificate`` holds the infeasible halfspace system ``(A, b)``.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class RhoOutOfRange(GeometryError):
    pass


class NonBracketing(GeometryError):
    pass


class CutMissesRegion(GeometryError):
    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = tuple(path)


class TooManyHyperplanes(GeometryError):
    pass


class DuplicateSites(GeometryError):
    pass


class EmptyIntersection(GeometryError):
    def __init__(self, message, cells=()):
        super().__init__(message)
        self.cells = list(cells)


class NotACovering(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass


class ViolationFound(GeometryError):
    """A proved inequality failed numerically; ``report`` carries the instance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
