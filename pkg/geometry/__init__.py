"""
Geometry - rigid transforms and pinhole projection for text positions

Conventions: a Pose is T_wc (camera frame -> world frame). Projection goes
through its inverse T_cw. Camera frame is x right, y down, z forward.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.spatial.transform import Rotation

from utils.errors import TextlandError

EPSILON_Z = 1e-6
DEFAULT_BORDER_MARGIN = 20.0
ORTHONORMAL_TOLERANCE = 1e-9


class BehindCamera(TextlandError):
    """The point lies on or behind the image plane and cannot be projected."""


class NonPositiveDepth(TextlandError):
    """Back-projection requires a strictly positive depth."""


class InvalidPose(TextlandError):
    """Rotation is not a proper orthonormal matrix or shapes are wrong."""


# ═══════════════════════════════════════════════════════════════════════════════
# VALUE TYPES
# ═══════════════════════════════════════════════════════════════════════════════

class PixelPoint(NamedTuple):
    u: float
    v: float


class WorldPoint(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, values) -> "WorldPoint":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


@dataclass(frozen=True)
class QuadBox:
    """Four detection-order corners of a text box."""

    corners: tuple

    def __post_init__(self):
        corners = tuple(PixelPoint(float(c[0]), float(c[1])) for c in self.corners)
        if len(corners) != 4:
            raise ValueError(f"QuadBox needs exactly 4 corners, got {len(corners)}")
        if not all(math.isfinite(c.u) and math.isfinite(c.v) for c in corners):
            raise ValueError("QuadBox corners must be finite")
        object.__setattr__(self, "corners", corners)

    def as_list(self) -> list[list[float]]:
        return [[c.u, c.v] for c in self.corners]


class Intrinsics(BaseModel):
    """Pixel-space pinhole camera: alpha = focal length over pixel size."""

    model_config = ConfigDict(frozen=True)

    alpha_x: float = Field(gt=0)
    alpha_y: float = Field(gt=0)
    u0: float = Field(ge=0)
    v0: float = Field(ge=0)
    width: int = Field(gt=0)
    height: int = Field(gt=0)

    @model_validator(mode="after")
    def _principal_point_in_image(self):
        if not self.u0 < self.width:
            raise ValueError(f"u0={self.u0} must be < width={self.width}")
        if not self.v0 < self.height:
            raise ValueError(f"v0={self.v0} must be < height={self.height}")
        return self

    def matrix(self) -> np.ndarray:
        """3x3 camera matrix K."""
        return np.array([
            [self.alpha_x, 0.0, self.u0],
            [0.0, self.alpha_y, self.v0],
            [0.0, 0.0, 1.0],
        ])


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid transform T_wc mapping camera-frame points to the world frame."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.array(self.rotation, dtype=float)
        translation = np.array(self.translation, dtype=float).reshape(-1)
        if rotation.shape != (3, 3) or translation.shape != (3,):
            raise InvalidPose(
                f"expected 3x3 rotation and 3-vector translation, "
                f"got {rotation.shape} and {translation.shape}"
            )
        if not (np.all(np.isfinite(rotation)) and np.all(np.isfinite(translation))):
            raise InvalidPose("pose contains non-finite values")
        if not np.allclose(rotation.T @ rotation, np.eye(3), rtol=0, atol=ORTHONORMAL_TOLERANCE):
            raise InvalidPose("rotation is not orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > ORTHONORMAL_TOLERANCE:
            raise InvalidPose("rotation determinant is not +1")
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_quaternion(cls, translation: Sequence[float], quaternion: Sequence[float]) -> "Pose":
        """Build a pose from a translation and a scalar-last (x, y, z, w) quaternion."""
        q = np.asarray(quaternion, dtype=float)
        norm = np.linalg.norm(q)
        if not norm > 1e-12:
            raise InvalidPose("quaternion has zero norm")
        return cls(Rotation.from_quat(q / norm).as_matrix(), translation)

    def quaternion(self) -> np.ndarray:
        """Scalar-last unit quaternion of the rotation."""
        return Rotation.from_matrix(self.rotation).as_quat()

    def matrix(self) -> np.ndarray:
        """4x4 homogeneous matrix."""
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)

    def compose(self, other: "Pose") -> "Pose":
        """self ∘ other: apply other first, then self."""
        return Pose(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def apply(self, point) -> np.ndarray:
        """Transform a 3-vector (or an (n, 3) array) by this pose."""
        p = np.asarray(point, dtype=float)
        return p @ self.rotation.T + self.translation

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pose):
            return NotImplemented
        return bool(
            np.array_equal(self.rotation, other.rotation)
            and np.array_equal(self.translation, other.translation)
        )

    def __repr__(self) -> str:
        return f"Pose(t={self.translation.tolist()}, q={self.quaternion().tolist()})"


# ═══════════════════════════════════════════════════════════════════════════════
# PROJECTION
# ═══════════════════════════════════════════════════════════════════════════════

def world_to_camera(pose: Pose, p) -> np.ndarray:
    """P_c = T_cw * P_w."""
    return pose.inverse().apply(p)


def world_to_pixel(
    pose: Pose,
    intr: Intrinsics,
    p: WorldPoint,
    epsilon_z: float = EPSILON_Z,
) -> tuple[PixelPoint, float]:
    """
    Project a world point into the image.

    Returns:
        Tuple of (pixel, depth) where depth is z in the camera frame.

    Raises:
        BehindCamera: if the camera-frame depth is not above epsilon_z.
    """
    x_c, y_c, z_c = world_to_camera(pose, p)
    if z_c <= epsilon_z:
        raise BehindCamera(f"point {tuple(p)} has camera depth {z_c:.6g} m")
    u = intr.alpha_x * x_c / z_c + intr.u0
    v = intr.alpha_y * y_c / z_c + intr.v0
    return PixelPoint(float(u), float(v)), float(z_c)


def pixel_to_world(pose: Pose, intr: Intrinsics, px: PixelPoint, depth: float) -> WorldPoint:
    """Back-project a pixel at a known camera depth into the world frame."""
    if not depth > 0:
        raise NonPositiveDepth(f"depth must be > 0, got {depth}")
    p_c = np.array([
        depth * (px[0] - intr.u0) / intr.alpha_x,
        depth * (px[1] - intr.v0) / intr.alpha_y,
        depth,
    ])
    return WorldPoint.from_array(pose.apply(p_c))


def project_quad(pose: Pose, intr: Intrinsics, corners, epsilon_z: float = EPSILON_Z) -> tuple[QuadBox, list[float]]:
    """Project four world corners; returns the quad and the per-corner depths."""
    pixels, depths = [], []
    for corner in corners:
        px, z = world_to_pixel(pose, intr, corner, epsilon_z)
        pixels.append(px)
        depths.append(z)
    return QuadBox(tuple(pixels)), depths


def box_center(box: QuadBox) -> PixelPoint:
    """Mean of the four corners."""
    us = [c.u for c in box.corners]
    vs = [c.v for c in box.corners]
    return PixelPoint(sum(us) / 4.0, sum(vs) / 4.0)


def border_filter(box: QuadBox, intr: Intrinsics, margin: float = DEFAULT_BORDER_MARGIN) -> bool:
    """True when every corner keeps at least `margin` pixels from the image border."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    return all(
        margin <= c.u <= intr.width - margin and margin <= c.v <= intr.height - margin
        for c in box.corners
    )


__all__ = [
    "EPSILON_Z",
    "DEFAULT_BORDER_MARGIN",
    "BehindCamera",
    "NonPositiveDepth",
    "InvalidPose",
    "PixelPoint",
    "WorldPoint",
    "QuadBox",
    "Intrinsics",
    "Pose",
    "world_to_camera",
    "world_to_pixel",
    "pixel_to_world",
    "project_quad",
    "box_center",
    "border_filter",
]
