"""Exception types raised across the package."""


class QuaternionDomainError(ValueError):
    """An operation was evaluated outside its mathematical domain."""


class ShapeError(ValueError):
    """Operands have incompatible lengths or shapes."""


class NotEtaHermitianError(ValueError):
    """A factorisation precondition on matrix structure failed."""


class DegenerateSpectrumError(ArithmeticError):
    """Repeated singular values make a factorisation non-unique."""


class NondifferentiablePointError(QuaternionDomainError):
    """A derivative was requested on a non-differentiable set."""


class DivergenceError(ArithmeticError):
    """An adaptive filter produced a non-finite or runaway error."""
