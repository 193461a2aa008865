"""
Tests for poses, pinhole projection and the border filter
"""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from geometry import (
    BehindCamera,
    Intrinsics,
    InvalidPose,
    NonPositiveDepth,
    PixelPoint,
    Pose,
    QuadBox,
    WorldPoint,
    border_filter,
    box_center,
    pixel_to_world,
    project_quad,
    world_to_camera,
    world_to_pixel,
)


def quad(*corners):
    return QuadBox(tuple(corners))


class TestPose:
    """Tests for rigid transforms."""

    def test_identity_maps_points_to_themselves(self):
        assert np.array_equal(Pose.identity().apply([1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])

    def test_rejects_non_orthonormal_rotation(self):
        with pytest.raises(InvalidPose):
            Pose(np.diag([1.0, 2.0, 1.0]), np.zeros(3))

    def test_rejects_reflection(self):
        with pytest.raises(InvalidPose):
            Pose(np.diag([1.0, 1.0, -1.0]), np.zeros(3))

    def test_rejects_bad_shapes(self):
        with pytest.raises(InvalidPose):
            Pose(np.eye(3), np.zeros(4))

    def test_inverse_composes_to_identity(self):
        pose = Pose(Rotation.from_euler("xyz", [0.3, -1.1, 2.0]).as_matrix(), [1.0, -2.0, 0.5])
        composed = pose.compose(pose.inverse())
        assert np.allclose(composed.matrix(), np.eye(4), atol=1e-12)

    def test_quaternion_is_scalar_last(self):
        pose = Pose.from_quaternion([0, 0, 0], [0.0, 0.0, 0.0, 1.0])
        assert np.allclose(pose.rotation, np.eye(3))
        assert np.allclose(pose.quaternion(), [0.0, 0.0, 0.0, 1.0])

    def test_from_quaternion_normalizes(self):
        pose = Pose.from_quaternion([0, 0, 0], [0.0, 0.0, 0.0, 2.0])
        assert np.allclose(pose.rotation, np.eye(3))

    def test_zero_quaternion_rejected(self):
        with pytest.raises(InvalidPose):
            Pose.from_quaternion([0, 0, 0], [0.0, 0.0, 0.0, 0.0])

    def test_pose_is_immutable(self):
        pose = Pose.identity()
        with pytest.raises(ValueError):
            pose.translation[0] = 5.0


class TestIntrinsics:
    """Tests for camera intrinsics validation."""

    def test_principal_point_inside_image(self):
        with pytest.raises(ValueError):
            Intrinsics(alpha_x=500, alpha_y=500, u0=640, v0=240, width=640, height=480)

    def test_focal_length_positive(self):
        with pytest.raises(ValueError):
            Intrinsics(alpha_x=0, alpha_y=500, u0=320, v0=240, width=640, height=480)

    def test_matrix(self, intrinsics):
        k = intrinsics.matrix()
        assert k[0, 0] == 500.0 and k[0, 2] == 320.0 and k[2, 2] == 1.0


class TestProjection:
    """Tests for world <-> pixel conversion."""

    def test_point_on_optical_axis_hits_principal_point(self, intrinsics):
        px, depth = world_to_pixel(Pose.identity(), intrinsics, WorldPoint(0.0, 0.0, 2.0))
        assert px == PixelPoint(320.0, 240.0)
        assert depth == 2.0

    def test_camera_translation(self, intrinsics):
        pose = Pose(np.eye(3), [1.0, 0.0, 0.0])
        px, depth = world_to_pixel(pose, intrinsics, WorldPoint(1.0, 0.0, 4.0))
        assert px == PixelPoint(320.0, 240.0)
        assert np.allclose(world_to_camera(pose, [1.0, 0.0, 4.0]), [0.0, 0.0, 4.0])

    def test_point_behind_camera(self, intrinsics):
        with pytest.raises(BehindCamera):
            world_to_pixel(Pose.identity(), intrinsics, WorldPoint(0.0, 0.0, -1.0))

    def test_point_on_image_plane(self, intrinsics):
        with pytest.raises(BehindCamera):
            world_to_pixel(Pose.identity(), intrinsics, WorldPoint(1.0, 1.0, 0.0))

    def test_non_positive_depth(self, intrinsics):
        with pytest.raises(NonPositiveDepth):
            pixel_to_world(Pose.identity(), intrinsics, PixelPoint(10.0, 10.0), 0.0)

    def test_back_projection_of_principal_point(self, intrinsics):
        p = pixel_to_world(Pose.identity(), intrinsics, PixelPoint(320.0, 240.0), 3.0)
        assert p == WorldPoint(0.0, 0.0, 3.0)

    def test_random_round_trips(self):
        """1000 random poses, cameras and points survive projection and back-projection."""
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            rotation = Rotation.random(random_state=int(rng.integers(2**31))).as_matrix()
            pose = Pose(rotation, rng.uniform(-10, 10, size=3))
            intr = Intrinsics(
                alpha_x=rng.uniform(200, 900), alpha_y=rng.uniform(200, 900),
                u0=rng.uniform(100, 500), v0=rng.uniform(100, 400), width=640, height=480,
            )
            p_c = np.array([rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.1, 10)])
            p_w = WorldPoint.from_array(pose.apply(p_c))

            px, depth = world_to_pixel(pose, intr, p_w)
            back = pixel_to_world(pose, intr, px, depth)
            assert np.linalg.norm(back.as_array() - p_w.as_array()) < 1e-9

    def test_project_quad_depths(self, intrinsics):
        corners = [(-0.5, -0.5, 2.0), (0.5, -0.5, 2.0), (0.5, 0.5, 2.0), (-0.5, 0.5, 2.0)]
        box, depths = project_quad(Pose.identity(), intrinsics, corners)
        assert depths == [2.0, 2.0, 2.0, 2.0]
        assert box.corners[0] == PixelPoint(195.0, 115.0)
        assert box_center(box) == PixelPoint(320.0, 240.0)


class TestQuadBox:
    """Tests for detection boxes."""

    def test_needs_four_corners(self):
        with pytest.raises(ValueError):
            quad((0, 0), (1, 0), (1, 1))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            quad((0, 0), (1, 0), (1, float("nan")), (0, 1))

    def test_center_is_corner_mean(self):
        assert box_center(quad((0, 0), (4, 0), (4, 2), (0, 2))) == PixelPoint(2.0, 1.0)


class TestBorderFilter:
    """Tests for rejecting boxes cut by the image border."""

    def test_corner_near_left_edge_rejected(self, intrinsics):
        box = quad((5, 100), (80, 100), (80, 140), (5, 140))
        assert not border_filter(box, intrinsics, 20)

    def test_zero_margin_accepts_in_image_box(self, intrinsics):
        box = quad((0, 0), (640, 0), (640, 480), (0, 480))
        assert border_filter(box, intrinsics, 0)

    def test_inner_box_accepted(self, intrinsics):
        box = quad((20, 20), (620, 20), (620, 460), (20, 460))
        assert border_filter(box, intrinsics, 20)

    def test_negative_margin_rejected(self, intrinsics):
        with pytest.raises(ValueError):
            border_filter(quad((1, 1), (2, 1), (2, 2), (1, 2)), intrinsics, -1)

    def test_monotone_in_margin(self, intrinsics):
        rng = np.random.default_rng(5)
        for _ in range(200):
            u = np.sort(rng.uniform(0, 640, size=2))
            v = np.sort(rng.uniform(0, 480, size=2))
            box = quad((u[0], v[0]), (u[1], v[0]), (u[1], v[1]), (u[0], v[1]))
            m1, m2 = np.sort(rng.uniform(0, 100, size=2))
            if border_filter(box, intrinsics, m2):
                assert border_filter(box, intrinsics, m1)
