"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidMomentsError(ValueError):
    """A falling-moment vector is not the moment sequence of any pmf on {0..r}."""


class ToleranceNotMet(RuntimeError):
    """Adaptive refinement exhausted its depth budget before reaching tolerance.

    Carries the best available value and the achieved error estimate so a
    caller can decide whether the partial answer is still usable.
    """

    def __init__(self, message, value=None, achieved=None, requested=None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved
        self.requested = requested
