"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class RepvarError(Exception):
    exit_code = 1


class ParseError(RepvarError, ValueError):
    """Malformed `.qa` or `.rep.json` input."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)


class AlgebraError(RepvarError, ValueError):
    """A quiver or relation set violates an algebra invariant."""

    exit_code = 2


class InvariantError(RepvarError, ValueError):
    """A representation violates shape or relation constraints."""

    exit_code = 3


class AlgebraMismatch(RepvarError, ValueError):
    exit_code = 3


class NonGenericSample(RepvarError):
    """A pivot required by the normal-form reduction vanished."""

    exit_code = 4


class NotStringAlgebra(RepvarError, ValueError):
    exit_code = 3


class OracleDisagreement(RepvarError):
    """Finite-field oracles at different primes disagree."""

    exit_code = 5


class EnumerationBudgetExceeded(RepvarError):
    exit_code = 3
