"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Input data violates a documented precondition (shape, stochasticity, ...)."""


class BudgetExceededError(RuntimeError):
    """A requested object would exceed the configured memory budget."""


class NumericalError(ArithmeticError):
    """A numerical invariant (e.g. positive semidefiniteness) failed beyond tolerance."""
