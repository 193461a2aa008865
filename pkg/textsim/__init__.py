"""
Text Similarity - edit distance and online grouping of homologous texts
"""

from dataclasses import dataclass, field
from typing import Iterator, Optional

import Levenshtein
from pydantic import BaseModel, ConfigDict, Field

from geometry import QuadBox
from utils.errors import TextlandError
from utils.log import get_logger

log = get_logger("textsim")

DEFAULT_SIMILARITY = {
    "threshold": 0.6,
    "case_fold": False,
}


class EmptyText(TextlandError):
    """A detection string is empty after whitespace trimming."""


class SimilarityConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: float = Field(default=DEFAULT_SIMILARITY["threshold"], ge=0.0, le=1.0)
    case_fold: bool = DEFAULT_SIMILARITY["case_fold"]


# ═══════════════════════════════════════════════════════════════════════════════
# DISTANCE
# ═══════════════════════════════════════════════════════════════════════════════

def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance over Unicode code points (unit-cost insert/delete/substitute)."""
    return Levenshtein.distance(a, b)


def similarity(a: str, b: str) -> float:
    """1 - distance / longer length; two empty strings are identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


def normalize_text(text: str, cfg: SimilarityConfig) -> str:
    """Trim whitespace and optionally case-fold; rejects empty results."""
    cleaned = text.strip()
    if not cleaned:
        raise EmptyText("text is empty after trimming")
    return cleaned.casefold() if cfg.case_fold else cleaned


# ═══════════════════════════════════════════════════════════════════════════════
# OBSERVATIONS AND CLASSES
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class TextObservation:
    """One detected string in one frame."""

    raw: str
    frame_id: int
    box: QuadBox
    depth: Optional[float] = None
    confidence: float = 1.0

    def __post_init__(self):
        if not self.raw.strip():
            raise EmptyText(f"frame {self.frame_id}: empty detection text")
        if self.depth is not None and not self.depth > 0:
            raise ValueError(f"depth must be > 0 or absent, got {self.depth}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must lie in [0, 1], got {self.confidence}")


@dataclass
class TextClass:
    """A group of homologous strings with their occurrence counts."""

    class_id: int
    members: dict[str, int] = field(default_factory=dict)
    canonical_name: Optional[str] = None

    def add(self, text: str, count: int = 1):
        if count < 1:
            raise ValueError("member counts start at 1")
        self.members[text] = self.members.get(text, 0) + count

    @property
    def representative(self) -> str:
        # max() keeps the first maximum, i.e. the earliest-inserted member on ties
        return max(self.members, key=self.members.__getitem__)

    @property
    def total(self) -> int:
        return sum(self.members.values())


class TextClassRegistry:
    """Ordered class_id -> TextClass map; ids are never reused."""

    def __init__(self, next_id: int = 0):
        self._classes: dict[int, TextClass] = {}
        self.next_id = next_id

    def __len__(self) -> int:
        return len(self._classes)

    def __iter__(self) -> Iterator[TextClass]:
        for class_id in sorted(self._classes):
            yield self._classes[class_id]

    def __contains__(self, class_id: int) -> bool:
        return class_id in self._classes

    def __getitem__(self, class_id: int) -> TextClass:
        return self._classes[class_id]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TextClassRegistry):
            return NotImplemented
        return self.next_id == other.next_id and self._classes == other._classes

    def ids(self) -> list[int]:
        return sorted(self._classes)

    def create(self, text: str) -> TextClass:
        text_class = TextClass(class_id=self.next_id)
        text_class.add(text)
        self._classes[text_class.class_id] = text_class
        self.next_id += 1
        return text_class

    def insert(self, text_class: TextClass):
        """Insert a fully formed class (used when loading a map)."""
        if not text_class.members:
            raise ValueError(f"class {text_class.class_id} has no members")
        self._classes[text_class.class_id] = text_class
        self.next_id = max(self.next_id, text_class.class_id + 1)

    def discard(self, class_id: int):
        self._classes.pop(class_id, None)


def assign(text: str, classes: TextClassRegistry, cfg: SimilarityConfig) -> tuple[int, bool]:
    """
    Put a string into the most similar class or open a new one.

    Returns:
        Tuple of (class_id, created)
    """
    text = normalize_text(text, cfg)

    best_id, best_sim = None, -1.0
    for text_class in classes:
        sim = similarity(text, text_class.representative)
        if sim > best_sim:
            best_id, best_sim = text_class.class_id, sim

    if best_id is not None and best_sim >= cfg.threshold:
        classes[best_id].add(text)
        return best_id, False

    created = classes.create(text)
    log.debug("new class %d for %r (best similarity %.3f)", created.class_id, text, best_sim)
    return created.class_id, True


__all__ = [
    "DEFAULT_SIMILARITY",
    "EmptyText",
    "SimilarityConfig",
    "edit_distance",
    "similarity",
    "normalize_text",
    "TextObservation",
    "TextClass",
    "TextClassRegistry",
    "assign",
]
