"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the admissible domain (u >= R^2, nbar out of range, ...)."""


class SeriesError(ValueError):
    """Invalid operand for truncated power-series arithmetic."""


class TruncationError(RuntimeError):
    """An infinite sum could not be truncated within the work limit."""


class IntegrationWarning(UserWarning):
    """Adaptive quadrature stopped before reaching the requested tolerance."""
