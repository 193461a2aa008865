"""
Map State Persistence - versioned JSON map files

Writes are deterministic (no timestamps, insertion-ordered members, repr
floats) so identical runs produce byte-identical files.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from config import parse_mapping_config
from geometry import WorldPoint
from landmarks import LandmarkRecord, Verdict
from memory import MemoryEntry, MemoryState, MemoryStatus
from pipeline import MapState
from textsim import TextClass, TextClassRegistry
from utils.errors import TextlandError

MAP_VERSION = 1


class MapVersionError(TextlandError):
    """Map file is missing, malformed or written by an unsupported version."""

    exit_code = 2


# ═══════════════════════════════════════════════════════════════════════════════
# ENCODING
# ═══════════════════════════════════════════════════════════════════════════════

def _point(p) -> Any:
    return None if p is None else [float(v) for v in p]


def landmark_entry(state: MapState, class_id: int) -> Dict[str, Any]:
    """One landmarks[] entry for a live class."""
    text_class = state.classes[class_id]
    record = state.records.get(class_id) or LandmarkRecord(class_id=class_id)
    memory = state.memory.entries.get(class_id) or MemoryEntry()
    return {
        "class_id": class_id,
        "canonical_name": record.canonical_name,
        "verdict": record.verdict.value,
        "member_counts": dict(text_class.members),
        "position": _point(record.final_position),
        "n_observations": record.n_observations,
        "status": memory.status.value,
        "score": memory.score,
        "observations": memory.observations,
        "promoted_frame": memory.promoted_frame,
        "positions": [_point(p) for p in record.positions],
    }


def map_to_dict(state: MapState) -> Dict[str, Any]:
    config = state.config.model_dump(mode="json")
    intrinsics = config.pop("intrinsics")
    return {
        "version": MAP_VERSION,
        "intrinsics": intrinsics,
        "config": config,
        "distilled": state.distilled,
        "last_frame_id": state.last_frame_id,
        "frames_ticked": state.memory.frame,
        "next_class_id": state.classes.next_id,
        "forgotten": state.memory.forgotten(),
        "landmarks": [landmark_entry(state, cid) for cid in state.classes.ids()],
    }


def dumps_map(state: MapState) -> str:
    return json.dumps(map_to_dict(state), ensure_ascii=False, indent=2) + "\n"


def save_map(state: MapState, path: Union[str, Path]):
    """Write the map file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_map(state))


# ═══════════════════════════════════════════════════════════════════════════════
# DECODING
# ═══════════════════════════════════════════════════════════════════════════════

def map_from_dict(data: Dict[str, Any], source: str = "<map>") -> MapState:
    version = data.get("version")
    if version != MAP_VERSION:
        raise MapVersionError(f"{source}: unsupported map version {version!r} (expected {MAP_VERSION})")

    try:
        config = parse_mapping_config({**data["config"], "intrinsics": data["intrinsics"]}, source)
        classes = TextClassRegistry(next_id=int(data["next_class_id"]))
        memory = MemoryState(frame=int(data.get("frames_ticked", 0)))
        records: dict[int, LandmarkRecord] = {}

        for class_id in data.get("forgotten", []):
            memory.entries[int(class_id)] = MemoryEntry(status=MemoryStatus.FORGOTTEN)

        for entry in data["landmarks"]:
            class_id = int(entry["class_id"])
            classes.insert(TextClass(
                class_id=class_id,
                members={str(k): int(v) for k, v in entry["member_counts"].items()},
                canonical_name=entry.get("canonical_name"),
            ))
            memory.entries[class_id] = MemoryEntry(
                score=float(entry.get("score", 0.0)),
                status=MemoryStatus(entry.get("status", MemoryStatus.SHORT_TERM.value)),
                observations=int(entry.get("observations", 0)),
                promoted_frame=entry.get("promoted_frame"),
            )
            position = entry.get("position")
            records[class_id] = LandmarkRecord(
                class_id=class_id,
                canonical_name=entry.get("canonical_name"),
                verdict=Verdict(entry.get("verdict", Verdict.UNKNOWN.value)),
                positions=[WorldPoint(*map(float, p)) for p in entry.get("positions", [])],
                final_position=None if position is None else WorldPoint(*map(float, position)),
            )
    except (KeyError, TypeError, ValueError) as e:
        raise MapVersionError(f"{source}: malformed map file: {e}")

    return MapState(
        config=config,
        classes=classes,
        memory=memory,
        records=records,
        distilled=bool(data.get("distilled", False)),
        last_frame_id=data.get("last_frame_id"),
    )


def load_map(path: Union[str, Path]) -> MapState:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise MapVersionError(f"map file not found: {path}")
    except json.JSONDecodeError as e:
        raise MapVersionError(f"{path}:{e.lineno}: invalid JSON: {e.msg}")
    if not isinstance(data, dict):
        raise MapVersionError(f"{path}: expected a JSON object")
    return map_from_dict(data, str(path))


__all__ = [
    "MAP_VERSION",
    "MapVersionError",
    "landmark_entry",
    "map_to_dict",
    "dumps_map",
    "save_map",
    "map_from_dict",
    "load_map",
]
