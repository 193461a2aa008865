"""
Reply parsing - answers come back wrapped in [[double brackets]]
"""

import re
from typing import Optional, Sequence

from llm.errors import NoSelection, UnparseableReply
from textsim import similarity

BRACKET_PATTERN = re.compile(r"\[\[([^\[\]]*)\]\]")
LOOSE_BRACKET_PATTERN = re.compile(r"\[\[(.*?)\]\]", re.DOTALL)
VERDICT_TOKEN = re.compile(r"(?<![0-9A-Za-z])(0|1|yes|no)(?![0-9A-Za-z])", re.IGNORECASE)
MEMBER_SIMILARITY = 0.8


def extract_bracketed(reply: str) -> Optional[str]:
    """Contents of the first [[...]] span, trimmed; None when absent or blank."""
    match = BRACKET_PATTERN.search(reply) or LOOSE_BRACKET_PATTERN.search(reply)
    if not match:
        return None
    content = match.group(1).strip("[] \t\r\n")
    return content or None


def parse_verdict(reply: str) -> bool:
    """Reduce a judgement reply to True (1 / yes) or False (0 / no)."""
    text = extract_bracketed(reply) or reply
    values = {token.lower() in ("1", "yes") for token in VERDICT_TOKEN.findall(text)}
    if len(values) != 1:
        raise UnparseableReply(f"cannot read a 0/1 verdict from reply: {reply!r}")
    return values.pop()


def resolve_member(
    candidate: str,
    names: Sequence[str],
    min_similarity: float = MEMBER_SIMILARITY,
) -> str:
    """
    Map a model answer onto one of `names`.

    Exact match first, then the highest case-folded similarity at or above
    min_similarity (earlier names win ties).
    """
    candidate = candidate.strip()
    if candidate in names:
        return candidate

    folded = candidate.casefold()
    best, best_sim = None, -1.0
    for name in names:
        sim = similarity(folded, name.casefold())
        if sim > best_sim:
            best, best_sim = name, sim

    if best is not None and best_sim >= min_similarity:
        return best
    raise NoSelection(f"{candidate!r} matches no candidate")


def longest_contained(reply: str, names: Sequence[str]) -> Optional[str]:
    """Longest name appearing verbatim in the reply."""
    contained = [name for name in names if name and name in reply]
    return max(contained, key=len) if contained else None
