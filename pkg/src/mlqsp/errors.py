"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition or theorem hypothesis."""


class DomainError(ValueError):
    """An operation would leave the admissible spectral domain."""


class PreconditionError(ValueError):
    """Input data (e.g. a target polynomial) fails a contract check."""


class FilterConstructionError(RuntimeError):
    """No filter meeting the requested accuracy was found below the degree cap."""

    def __init__(self, message, best_error=None, degree=None):
        super().__init__(message)
        self.best_error = best_error
        self.degree = degree


class SolverError(RuntimeError):
    """The phase-factor solver did not converge."""

    def __init__(self, message, best_residual=None, phases=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.phases = phases
