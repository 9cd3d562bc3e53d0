"""Exception hierarchy shared across the package.

ValidationError covers bad arguments, bad configuration, and violated
preconditions; the CLI maps it to exit code 1. NumericalError covers
failures of the numerical machinery itself and maps to exit code 2.
"""


class QcollideError(Exception):
    """Base class for package errors."""


class ValidationError(QcollideError, ValueError):
    """Invalid argument, configuration, or violated precondition."""


class UnsupportedPairError(ValidationError):
    """No closed form implemented for this combination of laws."""


class NoStationaryDistributionError(ValidationError):
    """A stationary queue quantity was requested at utilization >= 1."""


class NumericalError(QcollideError, RuntimeError):
    """A numerical routine failed to meet its contract."""


class ConvergenceError(NumericalError):
    """An iteration hit its cap before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AmbiguousFixedPointError(NumericalError):
    """The eigenvalue-1 eigenspace of a map has dimension greater than one."""

    def __init__(self, dimension):
        super().__init__(
            "fixed point is not unique: eigenvalue-1 eigenspace has "
            f"dimension {dimension}"
        )
        self.dimension = dimension


class StateInvariantError(NumericalError):
    """A density matrix drifted outside its tolerance envelope."""
