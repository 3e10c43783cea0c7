"""Exception hierarchy shared by the library, the CLI and the HTTP service."""


class QspError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class UsageError(QspError, ValueError):
    """Malformed input or mismatched operands."""

    exit_code = 4


class DomainError(QspError, ValueError):
    """Well-formed input outside the mathematical domain of an operation."""

    exit_code = 2


class CapExceededError(QspError):
    """A configured size cap would be exceeded."""

    exit_code = 3


class VerificationError(QspError):
    """An internal cross-check disagreed."""

    exit_code = 2


class PolyParseError(UsageError):
    """Polynomial text could not be parsed; ``position`` is a 0-based column."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at column {position + 1}\n  {text}\n  {pointer}")
