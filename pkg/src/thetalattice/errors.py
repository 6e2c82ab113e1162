"""Exception types shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """A series did not reach its tolerance within the term budget."""


class ReductionError(RuntimeError):
    """Reduction to the fundamental domain exceeded its iteration cap."""


class EvaluationError(ArithmeticError):
    """An objective evaluation produced a non-finite value."""


class ThresholdAmbiguityError(RuntimeError):
    """The phase predicate is not monotone across a bisection bracket."""

    def __init__(self, message, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi
