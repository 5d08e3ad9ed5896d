"""Exception hierarchy shared by every module."""


class ImprojError(Exception):
    """Base class for all errors raised by improj."""

    kind = "error"


class ParseError(ImprojError):
    """Malformed polynomial or point text.  ``offset`` is a 0-based byte offset."""

    kind = "parse_error"

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)
        self.offset = offset


class PreconditionError(ImprojError):
    """Input is well-formed but outside the domain of the requested operation."""

    kind = "precondition"
