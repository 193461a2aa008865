"""
Line reader shared by the text formats
"""

from pathlib import Path
from typing import Iterator, Union

from utils.errors import ParseError


def read_lines(path: Union[str, Path]) -> Iterator[tuple[int, str]]:
    """Yield (line number, stripped text), decoding each line as UTF-8."""
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                text = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(path, lineno, f"invalid UTF-8 at byte {e.start}")
            yield lineno, text.strip()
