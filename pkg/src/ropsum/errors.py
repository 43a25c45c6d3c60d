"""Exception hierarchy shared across the package.

Parse failures and precondition violations are kept apart so the CLI can
map them to distinct exit codes (2 and 3 respectively).
"""


class RopsumError(Exception):
    """Base class for all package errors."""


class ParseError(RopsumError):
    """Malformed textual input; carries the offending position when known."""

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class PreconditionError(RopsumError):
    """A documented precondition was violated by the caller."""


class FieldMismatch(PreconditionError):
    """Operands live in different fields."""


class DivisionByZero(PreconditionError, ZeroDivisionError):
    """Division or inversion of a zero field element."""


class SharedVariables(PreconditionError):
    """Variable-disjoint multiplication applied to overlapping supports."""


class IndexOutOfRange(PreconditionError):
    """Variable index outside 1..n."""


class EqualIndices(PreconditionError):
    """An operation on a variable pair received i == j."""


class NotMultiplicative(PreconditionError):
    """Formula contains an addition gate where none is allowed."""


class TooFewVariables(PreconditionError):
    """Formula has fewer variables than the operation requires."""


class TooManyVariables(PreconditionError):
    """Formula has more variables than the operation requires."""


class DegenerateLeaf(PreconditionError):
    """A leaf (or gate) carries a zero scale where a nonzero one is required."""


class WrongArity(PreconditionError):
    """Polynomial does not have the required number of variables."""


class PreconditionViolated(PreconditionError):
    """Generic named precondition failure."""


class CharacteristicTwo(PreconditionError):
    """Operation requires a field of characteristic != 2."""


class InfeasibleParameters(PreconditionError):
    """Requested exhaustive enumeration is outside the feasible range."""


class ParameterMismatch(PreconditionError):
    """Oracle query parameters do not match the enumerated class."""
