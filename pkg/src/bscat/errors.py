"""Error taxonomy shared by all bscat modules."""


class BscatError(Exception):
    """Base class for all bscat errors."""


class DomainError(BscatError):
    """Input outside the mathematical domain of an operation."""


class QuadratureError(BscatError):
    """A quadrature failed to reach its internal tolerance."""


class ConvergenceError(BscatError):
    """An iterative evaluation (truncation parameter, regulator) did not converge."""


class ToleranceNotMet(BscatError):
    """An integral finished but its error estimate exceeds the requested tolerance.

    Carries the best value and the estimate so callers can decide to accept.
    """

    def __init__(self, message, value=None, abs_error_estimate=None):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate


class UnwrapError(BscatError):
    """Phase unwrapping encountered a step too large for the grid density."""


class InsufficientData(BscatError):
    """Not enough grid points inside the requested fit window."""
