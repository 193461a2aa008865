"""
Long/Short-Term Memory - scored filter that promotes persistent text classes

Each observation adds `increment` to a class score, every frame subtracts
`decay` from short-term scores. Reaching `promote_threshold` moves a class to
long-term memory for good; decaying to zero forgets it.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.log import get_logger

log = get_logger("memory")

DEFAULT_MEMORY = {
    "increment": 1.0,
    "decay": 0.1,
    "promote_threshold": 5.0,
}

# Scores within this distance of a boundary count as on it
SCORE_EPSILON = 1e-9


class MemoryStatus(str, Enum):
    SHORT_TERM = "short_term"
    LONG_TERM = "long_term"
    FORGOTTEN = "forgotten"


class MemoryConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    increment: float = Field(default=DEFAULT_MEMORY["increment"], gt=0)
    decay: float = Field(default=DEFAULT_MEMORY["decay"], ge=0)
    promote_threshold: float = Field(default=DEFAULT_MEMORY["promote_threshold"], gt=0)

    @model_validator(mode="after")
    def _threshold_above_increment(self):
        if not self.promote_threshold > self.increment:
            raise ValueError(
                "promote_threshold must exceed increment, otherwise one sighting promotes"
            )
        return self


@dataclass
class MemoryEntry:
    score: float = 0.0
    status: MemoryStatus = MemoryStatus.SHORT_TERM
    observations: int = 0
    promoted_frame: Optional[int] = None


@dataclass
class MemoryState:
    """Per-class scores; `frame` counts tick_frame calls."""

    entries: dict[int, MemoryEntry] = field(default_factory=dict)
    frame: int = 0

    def status(self, class_id: int) -> Optional[MemoryStatus]:
        entry = self.entries.get(class_id)
        return entry.status if entry else None

    def _ids_with(self, status: MemoryStatus) -> list[int]:
        return sorted(cid for cid, e in self.entries.items() if e.status is status)

    def long_term(self) -> list[int]:
        return self._ids_with(MemoryStatus.LONG_TERM)

    def short_term(self) -> list[int]:
        return self._ids_with(MemoryStatus.SHORT_TERM)

    def forgotten(self) -> list[int]:
        return self._ids_with(MemoryStatus.FORGOTTEN)


def observe(state: MemoryState, class_id: int, cfg: MemoryConfig) -> MemoryState:
    """Credit one sighting of a class, promoting it when the threshold is met."""
    entry = state.entries.setdefault(class_id, MemoryEntry())
    entry.observations += 1

    if entry.status is MemoryStatus.LONG_TERM:
        return state

    if entry.status is MemoryStatus.FORGOTTEN:
        entry.status = MemoryStatus.SHORT_TERM
        entry.score = cfg.increment
    else:
        entry.score += cfg.increment

    if entry.score >= cfg.promote_threshold - SCORE_EPSILON:
        entry.status = MemoryStatus.LONG_TERM
        entry.promoted_frame = state.frame
        log.debug("class %d promoted to long-term memory (score %.3f)", class_id, entry.score)
    return state


def tick_frame(state: MemoryState, cfg: MemoryConfig) -> MemoryState:
    """Apply one frame of forgetting to every short-term class."""
    state.frame += 1
    if cfg.decay == 0:
        return state

    for class_id, entry in state.entries.items():
        if entry.status is not MemoryStatus.SHORT_TERM:
            continue
        entry.score -= cfg.decay
        if entry.score <= SCORE_EPSILON:
            entry.score = 0.0
            entry.status = MemoryStatus.FORGOTTEN
            log.debug("class %d forgotten", class_id)
    return state


__all__ = [
    "DEFAULT_MEMORY",
    "SCORE_EPSILON",
    "MemoryStatus",
    "MemoryConfig",
    "MemoryEntry",
    "MemoryState",
    "observe",
    "tick_frame",
]
