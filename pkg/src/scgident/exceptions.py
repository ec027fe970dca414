class ScgIdentError(Exception):
    """Base class for errors raised by this package."""


class GraphValidationError(ScgIdentError, ValueError):
    """A graph value violates a structural invariant."""


class WindowTooSmallError(GraphValidationError):
    def __init__(self, window_len, minimum):
        super().__init__(
            f"window length {window_len} is too small; need at least {minimum}"
        )
        self.window_len = window_len
        self.minimum = minimum


class IncompatibleSCGError(ScgIdentError, ValueError):
    """The summary graph does not summarize the given micro-level graph."""


class InconsistentOrientationError(ScgIdentError):
    """Orientation rules produced a contradiction (cycle or conflicting arrowheads)."""


class ParseError(ScgIdentError, ValueError):
    def __init__(self, message, lineno=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.lineno = lineno


class BudgetExceededError(ScgIdentError):
    pass
