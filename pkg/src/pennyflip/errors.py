"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class SingularProblemError(ArithmeticError):
    """The linear system for the first move of Q cannot be solved reliably."""


class DegenerateCompositionError(ArithmeticError):
    """The adversary's relative rotation is a pure phase, so its axis is undefined."""


class ParameterInconsistencyError(ValueError):
    """The free parameters do not yield a unit Bloch vector (or a consistent gamma).

    ``norm`` carries the norm of the Bloch vector that the closed form produced.
    """

    def __init__(self, message: str, norm: float | None = None):
        super().__init__(message)
        self.norm = norm
