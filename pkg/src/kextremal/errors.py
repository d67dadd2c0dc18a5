"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument lies outside the support of the function being evaluated."""


class NumericFailure(ArithmeticError):
    """A root finder did not reach its tolerance within the iteration cap.

    The final bracket is kept on ``bracket`` so callers can inspect how far
    the iteration got.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
