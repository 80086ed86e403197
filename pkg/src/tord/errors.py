"""Exception hierarchy shared by every ``tord`` module."""


class TordError(Exception):
    """Base class for all library errors."""


class UsageError(TordError, ValueError):
    """Arguments are inconsistent with each other (e.g. dimension mismatch)."""


class ValidationError(TordError, ValueError):
    """An input object violates one of its invariants."""


class UnsupportedError(TordError, ValueError):
    """The request is well formed but outside what is implemented."""


class ConvergenceError(TordError, RuntimeError):
    """Refinement hit its cap before meeting the tolerance.

    ``trace`` holds ``(steps, change)`` pairs for every refinement level and
    ``iterates`` the last two results that were compared.
    """

    def __init__(self, message, trace=(), iterates=()):
        super().__init__(message)
        self.trace = list(trace)
        self.iterates = tuple(iterates)
