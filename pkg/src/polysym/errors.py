"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PolysymError(Exception):
    """Base class for all library errors."""


class PreconditionError(PolysymError, ValueError):
    """An operation was called with arguments outside its domain."""


class DimensionError(PreconditionError):
    """Series, points or permutations of incompatible dimension were combined."""


class ParseError(PolysymError, ValueError):
    """Malformed expression or series text.

    ``position`` is the 1-based character offset of the offending token
    (``None`` when the error is not tied to a single location).
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NumericalBreakdown(PolysymError, ArithmeticError):
    """Floating point elimination hit a pivot it could not repair."""
