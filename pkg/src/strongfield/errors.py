"""Exception types shared by the solvers."""


class DomainError(ValueError):
    """An argument lies outside the set where the model is defined."""


class NumericError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    The best estimate available at the point of failure is kept on the
    exception so callers can decide whether it is still usable.
    """

    def __init__(self, message, *, iterations=None, estimate=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.estimate = estimate
        self.residual = residual


class CapacityError(RuntimeError):
    """The requested discretization exceeds the configured memory budget."""
