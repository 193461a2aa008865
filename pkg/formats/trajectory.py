"""
Trajectory files - one pose per line: "timestamp tx ty tz qx qy qz qw"
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from formats.lines import read_lines
from geometry import InvalidPose, Pose
from utils.errors import ParseError
from utils.log import get_logger

log = get_logger("formats.trajectory")

QUATERNION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class TimedPose:
    timestamp: float
    pose: Pose


def parse_trajectory_line(line: str, path, lineno: int) -> TimedPose:
    fields = line.split()
    if len(fields) != 8:
        raise ParseError(path, lineno, f"expected 8 fields, got {len(fields)}")
    try:
        values = [float(v) for v in fields]
    except ValueError as e:
        raise ParseError(path, lineno, str(e))
    if not np.all(np.isfinite(values)):
        raise ParseError(path, lineno, "non-finite value")

    timestamp, translation, quaternion = values[0], values[1:4], np.array(values[4:8])
    norm = float(np.linalg.norm(quaternion))
    if abs(norm - 1.0) > QUATERNION_TOLERANCE:
        log.warning("%s:%d: quaternion norm %.9f, normalizing", path, lineno, norm)
    try:
        pose = Pose.from_quaternion(translation, quaternion)
    except InvalidPose as e:
        raise ParseError(path, lineno, str(e))
    return TimedPose(timestamp, pose)


def load_trajectory(path: Union[str, Path]) -> list[TimedPose]:
    """Read a trajectory file; timestamps must strictly increase."""
    poses: list[TimedPose] = []
    for lineno, line in read_lines(path):
        if not line or line.startswith("#"):
            continue
        timed = parse_trajectory_line(line, path, lineno)
        if poses and timed.timestamp <= poses[-1].timestamp:
            raise ParseError(
                path, lineno,
                f"timestamp {timed.timestamp!r} does not increase (previous {poses[-1].timestamp!r})",
            )
        poses.append(timed)
    return poses


def format_trajectory_line(timed: TimedPose) -> str:
    values = [timed.timestamp, *timed.pose.translation, *timed.pose.quaternion()]
    return " ".join(repr(float(v)) for v in values)


def write_trajectory(poses: Iterable[TimedPose], path: Union[str, Path]):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("# timestamp tx ty tz qx qy qz qw\n")
        for timed in poses:
            f.write(format_trajectory_line(timed) + "\n")
