"""Exception hierarchy shared by every dimilp module."""


class DimilpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DimilpError, ValueError):
    pass


class SingularMatrix(DimilpError, ArithmeticError):
    pass


class NotInSplit(DimilpError, ValueError):
    """The LP vertex does not lie strictly inside the split disjunction."""


class AssumptionViolation(DimilpError):
    """An intermediate LP was infeasible or unbounded.

    Signals that the integer-optimal-cost assumption or the big-M box is
    misconfigured for the instance. ``agent`` and ``round`` are filled in by
    the simulator when known.
    """

    def __init__(self, message, agent=None, round=None):
        super().__init__(message)
        self.agent = agent
        self.round = round


class BadBigM(AssumptionViolation):
    """An agent's local constraint excludes the whole bounding box."""


class EnumerationBudgetExceeded(DimilpError):
    pass


class IterationCapExceeded(DimilpError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NoConvergence(DimilpError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NotStronglyConnected(DimilpError, ValueError):
    pass


class ConnectivityUnreachable(DimilpError):
    pass


class FeasibleInstanceUnreachable(DimilpError):
    pass


class UnboundedPolyhedron(DimilpError, ValueError):
    pass
