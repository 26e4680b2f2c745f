"""Exception hierarchy.

Input errors (bad files, shapes, asymmetric matrices) and solver errors
(stability, step limits, bad schedules) are kept apart so the command line
can map them to different exit codes.
"""


class DsmlinError(Exception):
    pass


class InputError(DsmlinError, ValueError):
    pass


class DimensionError(InputError):
    pass


class SymmetryError(InputError):
    pass


class MatrixMarketError(InputError):
    pass


class RangeError(InputError):
    """Right-hand side has a component in the null space of the operator."""

    def __init__(self, message, range_residual):
        super().__init__(message)
        self.range_residual = range_residual


class SolverError(DsmlinError, RuntimeError):
    pass


class EigenConvergenceError(SolverError):
    pass


class StabilityError(SolverError):
    pass


class StepLimitError(SolverError):
    pass


class ScheduleError(SolverError):
    pass
