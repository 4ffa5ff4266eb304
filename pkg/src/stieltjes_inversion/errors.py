"""Exception hierarchy shared by every module."""


class StieltjesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(StieltjesError, ValueError):
    pass


class IllConditionedPolesError(StieltjesError):
    pass


class PoleOutsideHalfPlaneError(InvalidInputError):
    pass


class EvaluationAtPoleError(InvalidInputError):
    pass


class BranchAmbiguityError(StieltjesError, ValueError):
    """Raised when a principal-branch function is asked for a value on its cut."""


class ConvergenceError(StieltjesError):
    def __init__(self, message, worst_residual=float("nan")):
        super().__init__(message)
        self.worst_residual = worst_residual


class ToleranceNotMetError(StieltjesError):
    """Adaptive quadrature ran out of panels; ``result`` holds the best estimate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
