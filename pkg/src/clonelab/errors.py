"""Exception hierarchy shared by all clonelab modules."""


class CloneLabError(Exception):
    """Base class for every error raised by clonelab."""


class AlgebraError(CloneLabError, ValueError):
    """Malformed operation, relation or argument (arity, range, domain)."""


class ParseError(AlgebraError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(CloneLabError):
    """An exact enumeration would exceed its configured cap.

    This is a desk-scale limit, never a statement about the answer.
    """


class IncompleteSaturation(CloneLabError):
    """Clone saturation stopped on its budget, so membership is undecided."""


class PreconditionError(CloneLabError):
    """A hypothesis required by a verifier does not hold."""


class DiagonalizationError(CloneLabError):
    """The diagonal construction produced a trace breaking its invariants."""
