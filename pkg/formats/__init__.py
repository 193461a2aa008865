"""
File Formats - trajectories, detection logs and their association into frames
"""

from dataclasses import dataclass

import numpy as np

from formats.detections import DetectionRecord, load_detections, write_detections
from formats.trajectory import TimedPose, load_trajectory, write_trajectory
from pipeline import FrameInput
from textsim import TextObservation
from utils.errors import TextlandError
from utils.log import get_logger

log = get_logger("formats")


class EmptyAssociation(TextlandError):
    """No detection fell within the association window of any pose."""

    exit_code = 3


@dataclass
class Association:
    frames: list[FrameInput]
    matched: int
    unmatched: int
    skipped_empty: int


def associate(poses: list[TimedPose], detections: list[DetectionRecord], window: float) -> Association:
    """
    Attach each detection to the nearest pose in time, within `window` seconds.

    Every pose yields a frame (frame_id = pose index) so memory decays once
    per tracked frame even when nothing is read.
    """
    frames = [FrameInput(frame_id=i, timestamp=tp.timestamp, pose=tp.pose) for i, tp in enumerate(poses)]
    stamps = np.array([tp.timestamp for tp in poses], dtype=float)

    matched = unmatched = skipped = 0
    for record in detections:
        if not record.text.strip():
            skipped += 1
            continue
        if len(stamps) == 0:
            unmatched += 1
            continue
        i = int(np.searchsorted(stamps, record.ts))
        neighbours = [j for j in (i - 1, i) if 0 <= j < len(stamps)]
        # ties go to the earlier pose
        best = min(neighbours, key=lambda j: (abs(stamps[j] - record.ts), j))
        if abs(stamps[best] - record.ts) > window:
            unmatched += 1
            continue
        frames[best].detections.append(TextObservation(
            raw=record.text,
            frame_id=best,
            box=record.quad,
            depth=record.depth_m,
            confidence=record.conf,
        ))
        matched += 1

    if skipped:
        log.warning("skipped %d detection(s) with empty text", skipped)
    if unmatched:
        log.warning("%d detection(s) had no pose within %.3f s", unmatched, window)
    if detections and matched == 0:
        raise EmptyAssociation(f"none of {len(detections)} detections matched a pose within {window} s")
    return Association(frames=frames, matched=matched, unmatched=unmatched, skipped_empty=skipped)


__all__ = [
    "DetectionRecord",
    "load_detections",
    "write_detections",
    "TimedPose",
    "load_trajectory",
    "write_trajectory",
    "EmptyAssociation",
    "Association",
    "associate",
]
