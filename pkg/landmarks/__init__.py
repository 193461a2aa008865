"""
Landmarks - per-class position buffers, verdicts and trimmed position clustering
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from geometry import WorldPoint
from utils.errors import TextlandError

DEFAULT_CLUSTER = {
    "iterations": 3,
    "trim_fraction": 0.2,
    "min_points": 1,
}

# relative precision below which two distances to the mean are equal
TIE_DECIMALS = 9


class EmptyInput(TextlandError):
    """Clustering needs at least one position."""


class Verdict(str, Enum):
    UNKNOWN = "unknown"
    LANDMARK = "landmark"
    NOT_LANDMARK = "not_landmark"


class ClusterConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    iterations: int = Field(default=DEFAULT_CLUSTER["iterations"], ge=1)
    trim_fraction: float = Field(default=DEFAULT_CLUSTER["trim_fraction"], ge=0.0, lt=1.0)
    min_points: int = Field(default=DEFAULT_CLUSTER["min_points"], ge=1)


@dataclass
class LandmarkRecord:
    class_id: int
    canonical_name: Optional[str] = None
    verdict: Verdict = Verdict.UNKNOWN
    positions: list[WorldPoint] = field(default_factory=list)
    final_position: Optional[WorldPoint] = None

    @property
    def n_observations(self) -> int:
        return len(self.positions)


def record_position(record: LandmarkRecord, p: WorldPoint) -> LandmarkRecord:
    """Append a position, keeping observation order."""
    if not all(math.isfinite(v) for v in p):
        raise ValueError(f"position must be finite, got {tuple(p)}")
    record.positions.append(WorldPoint(*(float(v) for v in p)))
    return record


def trim_count(k: int, trim_fraction: float) -> int:
    """ceil(trim_fraction * k), immune to 0.2 * 15 = 3.0000000000000004."""
    return math.ceil(round(trim_fraction * k, 9))


def cluster_positions(points: Sequence[WorldPoint], cfg: ClusterConfig) -> WorldPoint:
    """
    Iteratively drop the farthest points from the mean and return the survivors' mean.

    Each iteration removes ceil(trim_fraction * k) of the current k points,
    never going below cfg.min_points. Equal distances keep the earlier point.
    """
    if len(points) == 0:
        raise EmptyInput("cannot cluster an empty position list")

    pts = np.asarray(points, dtype=float).reshape(-1, 3)

    for _ in range(cfg.iterations):
        k = len(pts)
        if k <= cfg.min_points:
            break
        n_keep = max(k - trim_count(k, cfg.trim_fraction), cfg.min_points)
        if n_keep == k:
            break
        mean = pts.mean(axis=0)
        distances = np.linalg.norm(pts - mean, axis=1)
        # distances equal up to rounding noise count as ties; the lower index survives
        scale = float(distances.max()) or 1.0
        key = np.round(distances / scale, TIE_DECIMALS)
        order = np.lexsort((np.arange(k), key))
        pts = pts[np.sort(order[:n_keep])]

    return WorldPoint.from_array(pts.mean(axis=0))


__all__ = [
    "DEFAULT_CLUSTER",
    "EmptyInput",
    "Verdict",
    "ClusterConfig",
    "LandmarkRecord",
    "record_position",
    "trim_count",
    "cluster_positions",
]
