"""
Logging setup - library modules log, the CLI decides where it goes
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "textland"


def get_logger(module: str) -> logging.Logger:
    """Return the textland logger for a module, e.g. get_logger("pipeline")."""
    return logging.getLogger(f"{LOGGER_NAME}.{module}")


def setup_logging(verbose: bool = False) -> logging.Logger:
    """Install a rich stderr handler on the textland root logger."""
    root = logging.getLogger(LOGGER_NAME)
    root.handlers.clear()
    handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=verbose,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)
    root.propagate = False
    return root
