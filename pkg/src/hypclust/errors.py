"""Exception types shared across the package."""


class HypClustError(Exception):
    """Base class for errors raised by hypclust."""


class InvalidParameters(HypClustError, ValueError):
    """Model or configuration parameters outside their valid range."""


class ApproximationDomainError(HypClustError, ValueError):
    """An asymptotic approximation was requested outside its regime."""


class WindowUnavailable(HypClustError, ValueError):
    """The angular adjacency window does not apply to this pair of types."""


class OutOfDomain(HypClustError, ValueError):
    """A theory quantity was requested for parameters where it is not finite/defined."""


class QuadratureFailure(HypClustError, RuntimeError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BuilderCapExceeded(HypClustError, RuntimeError):
    """A quadratic builder was asked for a graph above its size cap."""


class InsufficientTail(HypClustError, ValueError):
    """Too few distinct large values for a tail-exponent estimate."""
