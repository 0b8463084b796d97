"""Exception hierarchy shared by every module of the package."""


class BlockadeError(Exception):
    """Base class for all package errors."""


class DimensionError(BlockadeError, ValueError):
    """Operator or Hilbert-space dimensions are inconsistent."""


class ParameterError(BlockadeError, ValueError):
    """Physical parameters violate a precondition."""


class NumericalError(BlockadeError, ArithmeticError):
    """A numerical procedure failed or produced an unphysical result."""


class SingularSystemError(NumericalError):
    """A linear system is singular beyond its expected null space."""


class PositivityError(NumericalError):
    """A density matrix has eigenvalues below the positivity tolerance."""


class ConvergenceTimeout(NumericalError):
    """Time integration hit ``t_max`` before reaching its tolerance."""

    def __init__(self, message: str, residual: float, state=None):
        super().__init__(message)
        self.residual = residual
        self.state = state


class UndefinedObservableError(NumericalError):
    """An observable is a ratio whose denominator vanishes."""


class DomainError(ParameterError):
    """A closed-form expression is evaluated outside its domain."""


class PoleError(NumericalError):
    """A closed-form expression is evaluated at (or next to) one of its poles."""
