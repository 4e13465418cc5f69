"""Exception hierarchy shared by the library and the command line."""


class VertexRankError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(VertexRankError, ValueError):
    """Malformed text input.  ``line`` is 1-based when known."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(VertexRankError, ValueError):
    """Input is well formed but violates an operation's precondition."""

    exit_code = 3


class InvariantError(VertexRankError, RuntimeError):
    """An internal consistency check failed."""

    exit_code = 4


class NotASquareError(PreconditionError):
    """A square root was needed that does not exist in Q(i)."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"{value} has no square root in Q(i)")
