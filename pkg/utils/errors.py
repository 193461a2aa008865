"""
Error base class - every textland failure carries its CLI exit code
"""


class TextlandError(Exception):
    """Base class for all textland errors."""

    exit_code = 1


class ParseError(TextlandError):
    """A file could not be parsed; carries the offending line number."""

    exit_code = 2

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        self.message = message
        super().__init__(f"{self.path}:{line}: {message}")


class ConfigError(TextlandError):
    """Invalid configuration file or value."""

    exit_code = 2
