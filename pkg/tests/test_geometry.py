import math
import random

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import BehindScreenError, GeometryError, InvalidAngleError, NoIntersectionError
from app.schemas.gaze import EulerGaze, Point2D, Vec3
from app.schemas.geometry import RigidPose, SceneCalibration
from app.services.geometry import (
    aim_at, gaze_ray, gaze_vector, intersect_screen, project_to_screen, projector_for, screen_plane
)


class TestGazeVector:
    def test_straight_ahead(self):
        assert gaze_vector(EulerGaze(0.0, 0.0)) == Vec3(0.0, -0.0, 1.0)

    def test_axis_cases(self):
        left = gaze_vector(EulerGaze(math.pi / 2, 0.0))
        assert left.x == pytest.approx(1.0, abs=1e-9)
        assert left.z == pytest.approx(0.0, abs=1e-9)
        down = gaze_vector(EulerGaze(0.0, math.pi / 2))
        assert down.y == pytest.approx(-1.0, abs=1e-9)
        assert down.z == pytest.approx(0.0, abs=1e-9)

    def test_thirty_ten(self):
        v = gaze_vector(EulerGaze.from_degrees(30.0, 10.0))
        assert tuple(v) == pytest.approx((0.492404, -0.173648, 0.852869), abs=1e-6)

    def test_unit_norm(self):
        rng = random.Random(7)
        for _ in range(100_000):
            v = gaze_vector(EulerGaze(rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi / 2, math.pi / 2)))
            assert math.hypot(*v) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("yaw, pitch", [(math.nan, 0.0), (0.0, math.inf), (4.0, 0.0), (0.0, 1.6)])
    def test_invalid_angles(self, yaw, pitch):
        with pytest.raises(InvalidAngleError):
            EulerGaze(yaw, pitch)


class TestCalibration:
    def test_flat_rotation_is_reshaped(self):
        pose = RigidPose(rotation=[-1, 0, 0, 0, 1, 0, 0, 0, -1])
        assert pose.rotation == ((-1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, -1.0))

    def test_non_orthonormal_rotation_rejected(self):
        with pytest.raises(ValidationError, match="orthonormal"):
            RigidPose(rotation=[2, 0, 0, 0, 1, 0, 0, 0, 1])

    def test_reflection_rejected(self):
        with pytest.raises(ValidationError, match="determinant"):
            RigidPose(rotation=[-1, 0, 0, 0, 1, 0, 0, 0, 1])

    def test_origin_in_screen_plane_rejected(self):
        with pytest.raises(ValidationError, match="screen plane"):
            SceneCalibration()

    def test_eye_origin_in_screen_coordinates(self):
        calib = SceneCalibration(
            screen_pose=RigidPose(translation=(0.0, 0.0, 50.0)), eye_origin=(1.0, 2.0, 100.0)
        )
        assert calib.gaze_origin_world().tolist() == [1.0, 2.0, 150.0]


class TestScreenPlane:
    def test_identity_screen(self, front_calibration):
        plane = screen_plane(front_calibration)
        assert plane.normal == Vec3(0.0, 0.0, 1.0)
        assert plane.offset == 0.0

    def test_translated_screen(self):
        calib = SceneCalibration(screen_pose=RigidPose(translation=(0.0, 0.0, 50.0)))
        assert screen_plane(calib).offset == 50.0

    def test_screen_rotated_about_x(self):
        calib = SceneCalibration(screen_pose=RigidPose.about_axis("x", 90), eye_origin=(0.0, 0.0, 1000.0))
        plane = screen_plane(calib)
        assert plane.normal == pytest.approx((0.0, -1.0, 0.0), abs=1e-12)
        assert plane.offset == pytest.approx(0.0, abs=1e-12)


class TestRay:
    def test_camera_at_origin(self):
        calib = SceneCalibration(screen_pose=RigidPose(translation=(0.0, 0.0, 50.0)))
        origin, direction = gaze_ray(calib, Vec3(0.0, 0.0, 1.0))
        assert origin == Vec3(0.0, 0.0, 0.0)
        assert direction == Vec3(0.0, 0.0, 1.0)
        assert intersect_screen(calib, origin, direction) == Point2D(0.0, 0.0)

    def test_non_unit_vector_rejected(self, front_calibration):
        with pytest.raises(GeometryError):
            gaze_ray(front_calibration, Vec3(0.0, 0.0, 2.0))

    def test_parallel_ray(self, front_calibration):
        with pytest.raises(NoIntersectionError):
            intersect_screen(front_calibration, Vec3(0.0, 0.0, 1000.0), Vec3(1.0, 0.0, 0.0))

    def test_ray_pointing_away(self):
        calib = SceneCalibration(screen_pose=RigidPose(translation=(0.0, 0.0, 50.0)))
        with pytest.raises(BehindScreenError):
            intersect_screen(calib, Vec3(0.0, 0.0, 0.0), Vec3(0.0, 0.0, -1.0))


class TestProjection:
    def test_straight_ahead_hits_origin(self, front_calibration):
        point = project_to_screen(front_calibration, EulerGaze(0.0, 0.0))
        assert point.x == pytest.approx(0.0, abs=1e-9)
        assert point.y == pytest.approx(0.0, abs=1e-9)

    def test_downward_gaze(self, front_calibration):
        point = project_to_screen(front_calibration, EulerGaze(0.0, math.atan(0.35)))
        assert point.y == pytest.approx(-350.0, abs=1e-9)

    def test_looking_back_fails(self, front_calibration):
        with pytest.raises(BehindScreenError):
            project_to_screen(front_calibration, EulerGaze(math.pi, 0.0))

    def test_projector_matches_numpy_path(self, front_calibration):
        gaze = EulerGaze.from_degrees(5.0, 12.0)
        origin, direction = gaze_ray(front_calibration, gaze_vector(gaze))
        expected = intersect_screen(front_calibration, origin, direction)
        assert project_to_screen(front_calibration, gaze) == pytest.approx(expected, abs=1e-9)

    def test_projector_is_cached_per_calibration(self, front_calibration):
        same = SceneCalibration(camera_pose=RigidPose.about_axis("y", 180), eye_origin=(0.0, 0.0, 1000.0))
        assert projector_for(front_calibration) is projector_for(same)

    def test_aim_round_trip(self):
        calib = SceneCalibration(
            screen_pose=RigidPose.about_axis("x", 10, translation=(5.0, -20.0, 30.0)),
            camera_pose=RigidPose.about_axis("y", 170, translation=(3.0, 40.0, -2.0)),
            eye_origin=(10.0, 150.0, 900.0),
        )
        rng = np.random.default_rng(11)
        targets = rng.uniform(-500.0, 500.0, size=(10_000, 2))
        for x, y in targets:
            point = project_to_screen(calib, aim_at(calib, Point2D(x, y)))
            assert abs(point.x - x) < 1e-6 and abs(point.y - y) < 1e-6


def test_rotating_the_whole_scene_keeps_the_screen_point():
    calib = SceneCalibration(
        screen_pose=RigidPose.about_axis("x", 10, translation=(5.0, -20.0, 30.0)),
        camera_pose=RigidPose.about_axis("y", 170, translation=(3.0, 40.0, 900.0)),
    )
    q = RigidPose.about_axis("z", 37).matrix @ RigidPose.about_axis("x", -25).matrix
    rotated = SceneCalibration(
        screen_pose=RigidPose(
            rotation=(q @ calib.screen_pose.matrix).tolist(),
            translation=(q @ calib.screen_pose.vector).tolist(),
        ),
        camera_pose=RigidPose(
            rotation=(calib.camera_pose.matrix @ q.T).tolist(),
            translation=calib.camera_pose.translation,
        ),
    )
    np.testing.assert_allclose(rotated.gaze_origin_world(), q @ calib.gaze_origin_world(), atol=1e-9)

    rng = np.random.default_rng(3)
    for yaw, pitch in rng.uniform(-0.3, 0.3, size=(200, 2)):
        gaze = EulerGaze(float(yaw), float(pitch))
        before = project_to_screen(calib, gaze)
        after = project_to_screen(rotated, gaze)
        assert abs(before.x - after.x) < 1e-6 and abs(before.y - after.y) < 1e-6
