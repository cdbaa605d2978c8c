"""Exception hierarchy shared by every module."""


class CoverTimeError(Exception):
    """Base class for all library errors."""


class DisconnectedGraph(CoverTimeError):
    pass


class NonpositiveConductance(CoverTimeError):
    pass


class UnknownBaseVertex(CoverTimeError):
    pass


class UnknownVertex(CoverTimeError):
    pass


class GraphFormatError(CoverTimeError):
    pass


class SolverFailure(CoverTimeError):
    pass


class BudgetExceeded(CoverTimeError):
    """A walk ran past its jump budget before meeting its stopping rule."""


class RejectionBudgetExceeded(CoverTimeError):
    """Rejection sampling exhausted its attempt budget."""


class SampleTooSmall(CoverTimeError):
    pass


class UsageError(CoverTimeError):
    """Invalid command-line arguments."""
