"""Exception hierarchy shared by every module."""


class SQGError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SQGError, ValueError):
    """Invalid grid, solver or scenario configuration."""


class DomainError(SQGError, ValueError):
    """An operator was applied outside its mathematical domain."""


class ShapeError(SQGError, ValueError):
    """Field sizes or grids do not match."""


class DataError(SQGError, ValueError):
    """Input data contains NaN or other unusable values."""


class PreconditionError(SQGError, ValueError):
    """A documented precondition on the inputs does not hold."""


class FormatError(SQGError, ValueError):
    """Malformed SQGF field file."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
