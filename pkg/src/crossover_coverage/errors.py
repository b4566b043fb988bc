"""Exception types shared across the package."""


class CrossoverError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CrossoverError, ValueError):
    """An input violates its documented domain (NaN, wrong sign, bad shape)."""


class NumericalError(CrossoverError, ArithmeticError):
    """A numerical routine could not certify its result.

    Carries the achieved estimate and error bound so a caller can decide
    whether the degraded answer is still usable.
    """

    def __init__(self, message, estimate=None, err_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.err_bound = err_bound


class QuadratureError(NumericalError):
    """Numerical integration failed to reach the requested tolerance."""


class RouteDisagreementError(NumericalError):
    """Two independent evaluation routes disagree beyond tolerance."""
