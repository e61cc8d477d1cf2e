"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class TabulatedParseError(ValueError):
    """A tabulated density file is malformed."""


class InfiniteMassError(ArithmeticError):
    """The weight does not integrate to a finite total mass."""


class IntegralNotConverged(ArithmeticError):
    """An integral finished with a verdict other than ``converged``.

    The offending ``IntegralOutcome`` is attached as ``outcome``.
    """

    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome


class DivergentIntegral(IntegralNotConverged):
    pass


class InconclusiveIntegral(IntegralNotConverged):
    pass


class InconsistencyError(ArithmeticError):
    """Numerical results contradict a guaranteed mathematical property."""


class DegeneracyError(ArithmeticError):
    """The recurrence hit a vanishing norm: too few support points or precision exhausted."""

    def __init__(self, message, degree=None, beta=None):
        super().__init__(message)
        self.degree = degree
        self.beta = beta
