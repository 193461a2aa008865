"""
Pipeline - runtime text mapping, distilling and navigation over one map

    process_frame   detections -> classes -> memory -> buffered positions
    distill         promoted classes -> canonical name, verdict, final position
    navigate        natural-language query -> (landmark name, stored position)
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from config import MappingConfig
from geometry import Pose, WorldPoint, border_filter, box_center, pixel_to_world
from landmarks import LandmarkRecord, Verdict, cluster_positions, record_position
from llm import LlmBackend, NoSelection, cluster_name, judge_landmark, select_landmark
from memory import MemoryEntry, MemoryState, MemoryStatus, observe, tick_frame
from textsim import TextClassRegistry, TextObservation, assign
from utils.errors import TextlandError
from utils.log import get_logger

log = get_logger("pipeline")


class StalePose(TextlandError):
    """Frame ids must strictly increase."""


class NoPromotedClasses(TextlandError):
    """Distilling needs at least one long-term class."""

    exit_code = 4


class MapNotDistilled(TextlandError):
    """Navigation runs on a distilled map only."""

    exit_code = 5


class NoLandmarks(TextlandError):
    """No candidate record carries a final position."""

    exit_code = 6


@dataclass
class FrameInput:
    frame_id: int
    timestamp: float
    pose: Pose
    detections: list[TextObservation] = field(default_factory=list)


@dataclass
class DistillReport:
    distilled: list[int] = field(default_factory=list)
    failures: dict[int, str] = field(default_factory=dict)


@dataclass
class MapState:
    config: MappingConfig
    classes: TextClassRegistry = field(default_factory=TextClassRegistry)
    memory: MemoryState = field(default_factory=MemoryState)
    records: dict[int, LandmarkRecord] = field(default_factory=dict)
    distilled: bool = False
    last_frame_id: Optional[int] = None
    rejected_border: int = field(default=0, compare=False)
    missing_depth: int = field(default=0, compare=False)
    last_report: Optional[DistillReport] = field(default=None, compare=False)

    def long_term_records(self) -> list[LandmarkRecord]:
        return [self.records[cid] for cid in self.memory.long_term() if cid in self.records]


def new_map(config: MappingConfig) -> MapState:
    return MapState(config=config)


# ═══════════════════════════════════════════════════════════════════════════════
# RUNTIME TEXT MAPPING
# ═══════════════════════════════════════════════════════════════════════════════

def process_frame(state: MapState, frame: FrameInput) -> MapState:
    """Fold one frame's detections into the map, then decay memory once."""
    if state.last_frame_id is not None and frame.frame_id <= state.last_frame_id:
        raise StalePose(
            f"frame {frame.frame_id} does not follow frame {state.last_frame_id}"
        )

    cfg = state.config
    for detection in frame.detections:
        if not border_filter(detection.box, cfg.intrinsics, cfg.border_margin):
            state.rejected_border += 1
            log.debug("frame %d: %r rejected at image border", frame.frame_id, detection.raw)
            continue

        class_id, _ = assign(detection.raw, state.classes, cfg.similarity)
        observe(state.memory, class_id, cfg.memory)
        record = state.records.setdefault(class_id, LandmarkRecord(class_id=class_id))

        # a depth at or below epsilon_z puts the text at the camera center
        if detection.depth is None or detection.depth <= cfg.epsilon_z:
            state.missing_depth += 1
            continue
        position = pixel_to_world(frame.pose, cfg.intrinsics, box_center(detection.box), detection.depth)
        record_position(record, position)

    tick_frame(state.memory, cfg.memory)
    _drop_forgotten(state)

    state.last_frame_id = frame.frame_id
    state.distilled = False
    return state


def _drop_forgotten(state: MapState):
    for class_id in state.memory.forgotten():
        if class_id in state.classes:
            log.debug("dropping forgotten class %d %r", class_id, state.classes[class_id].representative)
            state.classes.discard(class_id)
            # only the status of a dropped class is kept
            state.memory.entries[class_id] = MemoryEntry(status=MemoryStatus.FORGOTTEN)
        state.records.pop(class_id, None)


# ═══════════════════════════════════════════════════════════════════════════════
# DISTILLING
# ═══════════════════════════════════════════════════════════════════════════════

def _ask(backend: LlmBackend, members: dict[str, int]) -> tuple[str, bool]:
    name = cluster_name(backend, members)
    return name, judge_landmark(backend, name)


def distill(state: MapState, backend: LlmBackend) -> MapState:
    """
    Name, judge and position every long-term class.

    Backend calls may run concurrently (config.distill_workers); results are
    applied in class_id order. A class whose calls fail keeps verdict UNKNOWN
    and is listed in state.last_report.failures.
    """
    promoted = state.memory.long_term()
    if not promoted:
        raise NoPromotedClasses("no class reached long-term memory")

    cfg = state.config
    with ThreadPoolExecutor(max_workers=cfg.distill_workers) as pool:
        futures = {
            cid: pool.submit(_ask, backend, dict(state.classes[cid].members))
            for cid in promoted
        }

    report = DistillReport()
    for class_id in promoted:
        record = state.records.setdefault(class_id, LandmarkRecord(class_id=class_id))
        text_class = state.classes[class_id]
        try:
            name, is_landmark = futures[class_id].result()
        except TextlandError as e:
            log.warning("class %d: distill failed: %s", class_id, e)
            record.verdict = Verdict.UNKNOWN
            report.failures[class_id] = str(e)
        else:
            record.canonical_name = name
            text_class.canonical_name = name
            record.verdict = Verdict.LANDMARK if is_landmark else Verdict.NOT_LANDMARK
            report.distilled.append(class_id)

        if record.positions:
            record.final_position = cluster_positions(record.positions, cfg.cluster)

    state.distilled = True
    state.last_report = report
    return state


# ═══════════════════════════════════════════════════════════════════════════════
# NAVIGATION
# ═══════════════════════════════════════════════════════════════════════════════

def navigation_candidates(state: MapState) -> list[LandmarkRecord]:
    """Records eligible as navigation goals, in class_id order."""
    candidates = []
    for record in state.long_term_records():
        if record.canonical_name is None or record.final_position is None:
            continue
        if state.config.landmarks_only and record.verdict is not Verdict.LANDMARK:
            continue
        candidates.append(record)
    return candidates


def navigate(state: MapState, query: str, backend: LlmBackend) -> tuple[str, WorldPoint]:
    """Answer a request with a landmark name and its stored position."""
    if not state.distilled:
        raise MapNotDistilled("run distill before navigating")

    candidates = navigation_candidates(state)
    if not candidates:
        raise NoLandmarks("the map holds no landmark with a position")

    by_name: dict[str, LandmarkRecord] = {}
    for record in candidates:
        by_name.setdefault(record.canonical_name, record)

    selected = select_landmark(backend, query, list(by_name))
    if selected not in by_name:
        raise NoSelection(f"{selected!r} is not a mapped landmark")
    record = by_name[selected]
    return record.canonical_name, record.final_position


__all__ = [
    "StalePose",
    "NoPromotedClasses",
    "MapNotDistilled",
    "NoLandmarks",
    "FrameInput",
    "DistillReport",
    "MapState",
    "new_map",
    "process_frame",
    "distill",
    "navigation_candidates",
    "navigate",
]
