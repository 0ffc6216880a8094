"""Exception types shared across the package."""


class GqsError(Exception):
    """Base class for all errors raised by this package."""


class GqsValidationError(GqsError, ValueError):
    """Invalid input data: bad knots, parameters out of range, malformed files."""


class GqsShapeError(GqsError, ValueError):
    """Data violates the preconditions of a shape-preserving fit.

    Carries the 1-based index of the first offending interval and a short
    description of the failed condition.
    """

    def __init__(self, message, interval=None, condition=None):
        super().__init__(message)
        self.interval = interval
        self.condition = condition


class GqsToleranceError(GqsError, ArithmeticError):
    """Requested evaluation tolerance is unreachable within the level budget."""
