"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (the caller handed over
something malformed or outside an operation's domain) and
:class:`NotFoundError` (the input was fine, but the finite search did not
produce the requested object).  The CLI maps them to exit codes 2 and 1.
"""


class UnitPolyError(Exception):
    """Base class for every error raised by this package."""


class InputError(UnitPolyError, ValueError):
    pass


class NotFoundError(UnitPolyError):
    pass


class InvalidPolygonError(InputError):
    pass


class DegenerateError(InputError):
    pass


class DegenerateCircleError(DegenerateError):
    pass


class DegenerateTriangleError(DegenerateError):
    pass


class OutOfDomainError(InputError):
    pass


class EmptyRegionError(InputError):
    pass


class ParseError(InputError):
    """Malformed input file; the message names the offending line or field."""


class ValidationError(InputError):
    """A polygon fails one of the hypotheses it is required to satisfy.

    ``index`` names the offending vertex or side (0-based) when there is one.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoSolutionError(NotFoundError):
    pass


class ConvergenceError(NotFoundError):
    pass


class UnrealizableDistanceError(NotFoundError):
    pass


class NoSliceError(NotFoundError):
    pass


class AnchorNotFoundError(NotFoundError):
    def __init__(self, message, best_density=None):
        super().__init__(message)
        self.best_density = best_density


class ExhaustedCandidatesError(NotFoundError):
    def __init__(self, message, tried=0):
        super().__init__(message)
        self.tried = tried


class CertificationError(NotFoundError):
    """The area-bound case analysis could not be completed numerically."""
