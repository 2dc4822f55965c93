"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An input violates a documented precondition."""


class RangeError(ArithmeticError):
    """A function was evaluated outside its domain."""


class NoRootError(RuntimeError):
    """A scalar equation has no root where one was required."""


class NoMaximizerError(NoRootError):
    """A fiber profile has no interior maximizer."""


class ProjectionError(RuntimeError):
    """A field has no scaling onto the requested Nehari branch.

    The ``diagnosis`` attribute holds a short machine-readable reason.
    """

    def __init__(self, message, diagnosis=None):
        super().__init__(message)
        self.diagnosis = diagnosis


class EstimationError(RuntimeError):
    """A constant estimator did not converge."""


class SolverError(RuntimeError):
    """Every start of a branch minimization failed."""


class ConstructionError(RuntimeError):
    """A required starting element could not be built.

    ``margin`` is the signed amount by which the construction failed.
    """

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class GateRefusal(RuntimeError):
    """The parameters fall outside every applicable existence result.

    ``report`` carries the gate report that caused the refusal.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
