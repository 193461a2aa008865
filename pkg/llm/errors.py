"""
LLM errors
"""

from utils.errors import TextlandError


class BackendUnavailable(TextlandError):
    """Transport or API failure after the client's retries were exhausted."""


class UnparseableReply(TextlandError):
    """The reply holds no usable answer."""


class NoSelection(TextlandError):
    """The reply names nothing in the candidate list."""

    exit_code = 6
