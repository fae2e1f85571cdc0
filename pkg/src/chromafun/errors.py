"""Exception hierarchy.

Each class carries the CLI exit code for its failure class so that scripts
can tell bad input from exhausted limits from violated preconditions.
"""


class ChromaError(Exception):
    exit_code = 1


class ParseError(ChromaError, ValueError):
    """Malformed input text. ``offset`` is the byte position of the fault."""

    exit_code = 2

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class StructuralError(ChromaError, ValueError):
    """An object is ill-formed (index out of range, wrong length)."""

    exit_code = 2


class ResourceError(ChromaError):
    """A configured size limit or enumeration budget would be exceeded."""

    exit_code = 3


class DomainError(ChromaError, ValueError):
    """Arguments are well-formed but outside the operation's domain."""

    exit_code = 4


class PreconditionError(DomainError):
    """A documented precondition fails; ``witness`` shows where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotChromaticError(DomainError):
    """A polynomial has no nonnegative falling-factorial expansion."""
