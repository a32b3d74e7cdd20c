"""Exception hierarchy shared by every module."""


class RobustnessError(Exception):
    """Base class for all toolkit errors."""


class ContractViolation(RobustnessError, ValueError):
    """An argument breaks an operation's precondition (e.g. mask/graph mismatch)."""


class RemovedTargetError(RobustnessError, ValueError):
    """A removed node or edge was queried or attacked again."""


class GraphKindError(RobustnessError, TypeError):
    """The operation needs a directed (or undirected) graph and got the other kind."""


class ParameterError(RobustnessError, ValueError):
    """Infeasible parameter combination."""


class NoTargetError(RobustnessError):
    """No alive target remains for an attack strategy."""


class EdgeListFormatError(RobustnessError, ValueError):
    """Malformed edge-list input. ``lineno`` is 1-based, or None."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}"
        if lineno is not None:
            where += f":{lineno}"
        super().__init__(f"{where}: {message}" if where else message)
