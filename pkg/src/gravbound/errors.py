"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class ShapeError(ValueError):
    """Array or state dimensions do not match."""


class HorizonError(DomainError):
    """A time reaches or passes the horizon where the clock-noise rate diverges."""


class InstabilityError(ArithmeticError):
    """The integrator produced non-finite values."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite density matrix at step {step}")
