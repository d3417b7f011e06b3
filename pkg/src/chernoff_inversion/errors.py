"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined or validated."""


class UnsupportedApproximationError(ValueError):
    """The requested (kind, method) combination has no approximant."""


class InfeasibleBoundError(DomainError):
    """No deviation inside the validated domain certifies the requested level.

    The typical case is a lower-tail prediction bound with log(gamma)/mu < -1:
    the exact exponent never drops below -1 on [0, 1), so even a threshold at
    zero cannot be certified.
    """

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class ConvergenceError(RuntimeError):
    """The safeguarded root finder exhausted its iteration budget."""
