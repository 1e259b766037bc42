"""Exception hierarchy shared by all modules and mapped to CLI exit codes."""


class KLocalError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class InstanceError(KLocalError, ValueError):
    """An instance (hypergraph or Hamiltonian) violates its invariants."""

    exit_code = 2

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class InfeasibleGraph(KLocalError, ValueError):
    exit_code = 2


class DimensionLimitExceeded(KLocalError):
    exit_code = 3


class ConvergenceFailure(KLocalError):
    exit_code = 3


class NotNormalized(KLocalError, ValueError):
    exit_code = 2


class SupportTooLarge(KLocalError):
    exit_code = 4


class EnumerationCapExceeded(KLocalError):
    exit_code = 4


class Infeasible(KLocalError):
    """The moment LP could not meet its tolerances.

    ``min_slack`` is the smallest total constraint violation the solver found.
    """

    exit_code = 5

    def __init__(self, message, min_slack=float("nan")):
        super().__init__(message)
        self.min_slack = min_slack


class BoundViolation(KLocalError):
    exit_code = 6


class InternalError(KLocalError, RuntimeError):
    exit_code = 7
