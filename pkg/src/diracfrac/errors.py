"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class InvalidOrderError(ValueError):
    """A root or factorization order outside the supported range."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(ArithmeticError):
    """The gamma function was evaluated at a nonpositive integer."""


class AccuracyError(ArithmeticError):
    """A numerical method could not certify the requested accuracy.

    ``achieved`` carries the best error bound obtained, when one is known.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResolutionError(ValueError):
    """A spectral field is not resolved by its grid."""
