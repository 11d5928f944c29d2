"""Exception hierarchy shared across the package."""


class YeargraphError(Exception):
    """Base class for all package errors."""


class ConfigError(YeargraphError):
    """Invalid ingest or generator configuration."""


class RowError(YeargraphError):
    """A single input row is malformed.

    Carries the 0-based data-row index and the source file so callers can
    point at the offending line.
    """

    def __init__(self, source: str, row_index: int, message: str):
        self.source = source
        self.row_index = row_index
        super().__init__(f"{source}: data row {row_index}: {message}")


class ValidationError(YeargraphError):
    """A request or operation violates a precondition."""


class NotFoundError(YeargraphError):
    """A referenced id, type, or year does not exist."""


class SessionExpiredError(YeargraphError):
    """A layout session idled past its TTL and was dropped."""


class FormatError(YeargraphError):
    """An exchange-format file is malformed.

    ``line`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, path: str, line: int | None, message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")
