"""Exception hierarchy shared by all modules.

``DataError`` subclasses map to CLI exit code 2, ``ConfigError`` to 1.
"""

from __future__ import annotations


class SylsegError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SylsegError):
    """Bad parameters or missing resources (usage problem)."""


class DataError(SylsegError):
    """Input data that cannot be processed."""


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class InputDecodeError(DataError):
    """Input bytes are not valid UTF-8."""

    def __init__(self, offset: int, reason: str = "invalid UTF-8"):
        self.offset = offset
        super().__init__(f"{reason} at byte offset {offset}")


class UnsupportedEncodingError(DataError):
    pass


class SchemeMismatchError(DataError):
    pass
