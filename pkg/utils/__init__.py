"""
Utility functions for textland
"""

from utils.ui import (
    console,
    err_console,
    print_header,
    print_success,
    print_error,
    print_warning,
    print_info,
    make_table,
    format_float,
    format_point,
)
from utils.errors import TextlandError, ParseError, ConfigError
from utils.log import get_logger, setup_logging

__all__ = [
    # UI
    "console",
    "err_console",
    "print_header",
    "print_success",
    "print_error",
    "print_warning",
    "print_info",
    "make_table",
    "format_float",
    "format_point",
    # Errors
    "TextlandError",
    "ParseError",
    "ConfigError",
    # Logging
    "get_logger",
    "setup_logging",
]
