"""Exception types shared across the solver."""


class AimSolveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AimSolveError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ScalingError(AimSolveError, ValueError):
    """Physical-to-dimensionless scaling is undefined (requires B > 0)."""


class PivotError(AimSolveError, ValueError):
    """The evaluation pivot is undefined for the given parameters."""


class KappaRangeError(AimSolveError, ValueError):
    """The requested operation does not apply to this power-law exponent."""


class PrecisionError(AimSolveError, ArithmeticError):
    """A computation exhausted the working precision (non-finite result).

    Re-run with a larger ``precision_bits``.
    """


class BracketError(AimSolveError, RuntimeError):
    """A root bracket could not be established or was lost mid-refinement.

    ``trace`` holds the per-iteration eigenvalue estimates collected before
    the failure, when the caller was tracking convergence.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = tuple(trace)


class WindowError(AimSolveError, ValueError):
    """The requested node count is unreachable inside the energy window."""


class SingularIntegrandError(AimSolveError, RuntimeError):
    """A quadrature grid point could not be moved off an integrand pole."""


class ResolutionWarning(UserWarning):
    """The finite-difference grid looks too coarse for the returned value."""
