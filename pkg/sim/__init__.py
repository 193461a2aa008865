"""
Simulator - seeded synthetic mall walk producing poses, noisy text detections and ground truth

Signs are camera-facing squares. Each frame draws from its own generator,
seeded by (scenario seed, frame index), so a frame's noise does not depend
on how many draws earlier frames made.
"""

import json
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from scipy.spatial.transform import Rotation, Slerp

from formats import DetectionRecord, TimedPose, write_detections, write_trajectory
from geometry import (
    DEFAULT_BORDER_MARGIN,
    BehindCamera,
    Intrinsics,
    PixelPoint,
    Pose,
    QuadBox,
    WorldPoint,
    project_quad,
    world_to_pixel,
)
from utils.errors import ConfigError
from utils.log import get_logger

log = get_logger("sim")

# Look-alike glyphs an OCR engine mixes up; multi-character entries model
# digraph confusions such as w -> vv.
CONFUSABLES = {
    "l": ["I", "i", "1", "|"],
    "I": ["l", "i", "1", "|"],
    "i": ["l", "I", "1", "j"],
    "1": ["l", "I", "i", "7"],
    "O": ["0", "Q", "D"],
    "0": ["O", "o", "D"],
    "o": ["0", "O", "c"],
    "W": ["VV"],
    "w": ["vv"],
    "M": ["IVI", "N"],
    "m": ["rn", "n"],
    "S": ["5", "$"],
    "5": ["S"],
    "B": ["8", "R"],
    "8": ["B"],
    "E": ["F", "B"],
    "T": ["I", "7"],
    "G": ["6", "C"],
    "C": ["G", "("],
    "e": ["c", "o"],
    "a": ["o", "e"],
    "n": ["h", "r"],
    "h": ["b", "n"],
    "u": ["v"],
    "v": ["u", "y"],
    "U": ["V"],
    "V": ["U", "Y"],
    "'": ["`", ","],
    "-": ["_", "~"],
}

ASCII_LOWER = list(string.ascii_lowercase)
ASCII_UPPER = list(string.ascii_uppercase)
ASCII_DIGITS = list(string.digits)
PUNCTUATION = list("-'.,:!?&")
CJK_RANGE = (0x4E00, 0x9FFF)
SPURIOUS_ALPHABET = string.ascii_letters + string.digits


class NoiseConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    char_substitute_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    char_delete_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    char_insert_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    spurious_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    depth_sigma: float = Field(default=0.0, ge=0.0)
    miss_rate: float = Field(default=0.0, ge=0.0, le=1.0)


class Sign(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    center: tuple[float, float, float]
    half_extent: float = Field(default=0.25, gt=0)

    @field_validator("text")
    @classmethod
    def _text_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("sign text must not be empty")
        return value


class Waypoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: tuple[float, float, float]
    orientation: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64)
    intrinsics: Intrinsics
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    signs: list[Sign] = Field(min_length=1)
    waypoints: list[Waypoint] = Field(min_length=2)
    frames_per_segment: int = Field(default=30, ge=1)
    loop: bool = False
    frame_rate: float = Field(default=30.0, gt=0)
    start_time: float = 0.0
    border_margin: float = Field(default=DEFAULT_BORDER_MARGIN, ge=0)


@dataclass
class SimStream:
    poses: list[TimedPose] = field(default_factory=list)
    detections: list[DetectionRecord] = field(default_factory=list)
    ground_truth: list[dict] = field(default_factory=list)
    never_visible: list[str] = field(default_factory=list)


def load_scenario(path: Union[str, Path]) -> Scenario:
    try:
        with open(path, encoding="utf-8") as f:
            return Scenario.model_validate(json.load(f))
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}: invalid JSON: {e.msg}")
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}")


def frame_rng(seed: int, frame_index: int) -> np.random.Generator:
    """Independent generator for one frame."""
    return np.random.default_rng(np.random.SeedSequence([seed, frame_index]))


# ═══════════════════════════════════════════════════════════════════════════════
# TEXT CORRUPTION
# ═══════════════════════════════════════════════════════════════════════════════

def _is_cjk(ch: str) -> bool:
    return CJK_RANGE[0] <= ord(ch) <= CJK_RANGE[1]


def _script_pool(ch: str) -> list[str]:
    if ch in ASCII_LOWER:
        return ASCII_LOWER
    if ch in ASCII_UPPER:
        return ASCII_UPPER
    if ch in ASCII_DIGITS:
        return ASCII_DIGITS
    return PUNCTUATION


def _random_char(rng: np.random.Generator, like: str = "a") -> str:
    if _is_cjk(like):
        return chr(int(rng.integers(CJK_RANGE[0], CJK_RANGE[1] + 1)))
    return SPURIOUS_ALPHABET[int(rng.integers(len(SPURIOUS_ALPHABET)))]


def substitute(ch: str, rng: np.random.Generator) -> str:
    """A replacement that always differs from `ch`."""
    if _is_cjk(ch):
        while True:
            replacement = chr(int(rng.integers(CJK_RANGE[0], CJK_RANGE[1] + 1)))
            if replacement != ch:
                return replacement
    pool = sorted((set(CONFUSABLES.get(ch, [])) | set(_script_pool(ch))) - {ch})
    return pool[int(rng.integers(len(pool)))]


def corrupt(text: str, noise: NoiseConfig, rng: np.random.Generator) -> str:
    """Apply per-character deletion / substitution / insertion noise."""
    for _ in range(2):
        out = []
        for ch in text:
            if rng.random() >= noise.char_delete_rate:
                out.append(substitute(ch, rng) if rng.random() < noise.char_substitute_rate else ch)
            if rng.random() < noise.char_insert_rate:
                out.append(_random_char(rng, ch))
        result = "".join(out)
        if result.strip():
            return result
    return _random_char(rng, text[:1] or "a")


# ═══════════════════════════════════════════════════════════════════════════════
# TRAJECTORY
# ═══════════════════════════════════════════════════════════════════════════════

def interpolate_trajectory(scenario: Scenario) -> list[Pose]:
    """Linear translation and slerp rotation between consecutive waypoints."""
    waypoints = list(scenario.waypoints)
    if scenario.loop:
        waypoints.append(waypoints[0])

    n = scenario.frames_per_segment
    poses = []
    for start, end in zip(waypoints[:-1], waypoints[1:]):
        p0, p1 = np.array(start.position), np.array(end.position)
        slerp = Slerp([0.0, 1.0], Rotation.from_quat([start.orientation, end.orientation]))
        for k in range(n):
            t = k / n
            poses.append(Pose(slerp([t]).as_matrix()[0], (1 - t) * p0 + t * p1))
    if not scenario.loop:
        last = waypoints[-1]
        poses.append(Pose.from_quaternion(last.position, last.orientation))
    return poses


# ═══════════════════════════════════════════════════════════════════════════════
# RENDERING
# ═══════════════════════════════════════════════════════════════════════════════

def sign_corners(pose: Pose, sign: Sign) -> list[np.ndarray]:
    """World corners of a camera-facing square around the sign center."""
    h = sign.half_extent
    offsets = [(-h, -h, 0.0), (h, -h, 0.0), (h, h, 0.0), (-h, h, 0.0)]
    center = np.array(sign.center)
    return [center + pose.rotation @ np.array(o) for o in offsets]


def _center_visible(pose: Pose, intr: Intrinsics, center, margin: float) -> bool:
    try:
        (u, v), _ = world_to_pixel(pose, intr, WorldPoint(*center))
    except BehindCamera:
        return False
    return margin < u < intr.width - margin and margin < v < intr.height - margin


def _spurious(rng: np.random.Generator, intr: Intrinsics, margin: float) -> tuple[str, QuadBox, float]:
    length = int(rng.integers(3, 9))
    text = "".join(SPURIOUS_ALPHABET[int(i)] for i in rng.integers(len(SPURIOUS_ALPHABET), size=length))
    half_w, half_h = rng.uniform(10.0, 60.0), rng.uniform(8.0, 30.0)
    cu = rng.uniform(margin + half_w, max(margin + half_w, intr.width - margin - half_w))
    cv = rng.uniform(margin + half_h, max(margin + half_h, intr.height - margin - half_h))
    quad = QuadBox((
        PixelPoint(cu - half_w, cv - half_h),
        PixelPoint(cu + half_w, cv - half_h),
        PixelPoint(cu + half_w, cv + half_h),
        PixelPoint(cu - half_w, cv + half_h),
    ))
    return text, quad, float(rng.uniform(0.5, 5.0))


def render_stream(scenario: Scenario) -> SimStream:
    """Generate the pose list, detection log and ground truth for a scenario."""
    intr, noise, margin = scenario.intrinsics, scenario.noise, scenario.border_margin
    stream = SimStream(
        ground_truth=[{"text": s.text, "center": list(s.center)} for s in scenario.signs]
    )
    seen = [False] * len(scenario.signs)

    for index, pose in enumerate(interpolate_trajectory(scenario)):
        ts = scenario.start_time + index / scenario.frame_rate
        stream.poses.append(TimedPose(ts, pose))
        rng = frame_rng(scenario.seed, index)

        for s, sign in enumerate(scenario.signs):
            if not _center_visible(pose, intr, sign.center, margin):
                continue
            seen[s] = True
            if rng.random() < noise.miss_rate:
                continue
            try:
                quad, depths = project_quad(pose, intr, sign_corners(pose, sign))
            except BehindCamera:
                continue
            depth = float(np.mean(depths))
            if noise.depth_sigma > 0:
                depth = max(depth + float(rng.normal(0.0, noise.depth_sigma)), 1e-3)
            stream.detections.append(DetectionRecord(
                ts=ts,
                text=corrupt(sign.text, noise, rng),
                quad=quad,
                depth_m=depth,
                conf=round(float(rng.uniform(0.7, 1.0)), 4),
            ))

        if rng.random() < noise.spurious_rate:
            text, quad, depth = _spurious(rng, intr, margin)
            stream.detections.append(DetectionRecord(
                ts=ts, text=text, quad=quad, depth_m=depth,
                conf=round(float(rng.uniform(0.3, 0.7)), 4),
            ))

    stream.never_visible = [sign.text for sign, ok in zip(scenario.signs, seen) if not ok]
    for text in stream.never_visible:
        log.warning("sign %r is never visible along the trajectory", text)
    return stream


def write_stream(stream: SimStream, out_dir: Union[str, Path]) -> dict[str, Path]:
    """Write poses.txt, detections.jsonl and ground_truth.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "poses": out_dir / "poses.txt",
        "detections": out_dir / "detections.jsonl",
        "ground_truth": out_dir / "ground_truth.json",
    }
    write_trajectory(stream.poses, paths["poses"])
    write_detections(stream.detections, paths["detections"])
    with open(paths["ground_truth"], "w", encoding="utf-8", newline="\n") as f:
        json.dump({"signs": stream.ground_truth}, f, ensure_ascii=False, indent=2)
        f.write("\n")
    return paths


__all__ = [
    "CONFUSABLES",
    "NoiseConfig",
    "Sign",
    "Waypoint",
    "Scenario",
    "SimStream",
    "load_scenario",
    "frame_rng",
    "substitute",
    "corrupt",
    "interpolate_trajectory",
    "sign_corners",
    "render_stream",
    "write_stream",
]
