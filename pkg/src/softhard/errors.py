"""Exception hierarchy shared by all numerical modules."""


class NumericalError(RuntimeError):
    """A computation did not reach its accuracy or validity target."""


class ConvergenceError(NumericalError):
    """An iteration or refinement failed to converge.

    ``detail`` carries whatever the caller needs to diagnose the failure
    (last residual, last two values, worst point, ...).
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class SingularityError(NumericalError):
    """Step size underflow or blow-up; ``location`` is where it happened."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class PrecisionError(NumericalError):
    """Loss of significance; retrying in extended precision may help."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""
