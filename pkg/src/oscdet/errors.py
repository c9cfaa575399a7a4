"""Exception types shared across the library."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A closed-form expression was requested exactly at one of its poles."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class TailPreconditionError(ValueError):
    """The large-q series is not yet decreasing at the requested point.

    Carries ``suggested_q``, a point where the series should be usable.
    """

    def __init__(self, message, suggested_q=None):
        super().__init__(message)
        self.suggested_q = suggested_q


class AccuracyError(RuntimeError):
    """A tolerance could not be met.  Carries the best available estimate."""

    def __init__(self, message, best_estimate=None, err_est=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.err_est = err_est


class ModelError(RuntimeError):
    """A fitted model failed its sanity checks."""


class DivergenceError(ValueError):
    """The requested spectral sum does not converge."""
