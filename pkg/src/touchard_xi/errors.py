"""Exception types shared across the package."""


class TouchardXiError(Exception):
    """Base class for all package errors."""


class VariableMismatch(TouchardXiError, ValueError):
    pass


class DomainError(TouchardXiError, ValueError):
    pass


class PoleError(DomainError):
    pass


class NotPrimitive(TouchardXiError, ValueError):
    pass


class NotMultiplicative(TouchardXiError, ValueError):
    pass


class BadDomain(TouchardXiError, ValueError):
    pass


class MembershipFailure(TouchardXiError):
    """A polynomial that should lie in a span does not.

    ``residual`` holds the difference between the target and its best
    reconstruction from the basis (a polynomial, or a pair of them).
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
