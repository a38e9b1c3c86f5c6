"""Gaze-angle to screen-point geometry.

Conventions: the screen plane is z = 0 in screen coordinates and the user
sits at positive z. World coordinates are the screen pose's parent frame;
rotation inverses are transposes.
"""
import math
from functools import lru_cache

import numpy as np

from app.core.exceptions import BehindScreenError, GeometryError, NoIntersectionError, ProjectionError
from app.schemas.gaze import EulerGaze, Point2D, Vec3
from app.schemas.geometry import SceneCalibration, ScreenPlane
from app.utils.logging import get_logger

logger = get_logger(__name__)

PARALLEL_TOLERANCE = 1e-9
RESIDUAL_TOLERANCE_MM = 1e-6
UNIT_TOLERANCE = 1e-9


def gaze_vector(gaze: EulerGaze) -> Vec3:
    cos_pitch = math.cos(gaze.pitch)
    return Vec3(cos_pitch * math.sin(gaze.yaw), -math.sin(gaze.pitch), cos_pitch * math.cos(gaze.yaw))


def screen_plane(calib: SceneCalibration) -> ScreenPlane:
    normal = calib.screen_pose.matrix[:, 2]
    return ScreenPlane(Vec3(*map(float, normal)), float(normal @ calib.screen_pose.vector))


def gaze_ray(calib: SceneCalibration, v_eye: Vec3) -> tuple[Vec3, Vec3]:
    """Origin and unit direction of the gaze ray in world coordinates."""
    v = np.asarray(v_eye, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOLERANCE:
        raise GeometryError("Eye-frame gaze vector must have unit norm", field="v_eye")
    direction = calib.camera_pose.matrix.T @ v
    origin = calib.gaze_origin_world()
    return Vec3(*map(float, origin)), Vec3(*map(float, direction))


def intersect_screen(calib: SceneCalibration, origin: Vec3, direction: Vec3) -> Point2D:
    """Screen-plane point hit by an explicit world-frame ray."""
    plane = screen_plane(calib)
    n = np.asarray(plane.normal)
    o = np.asarray(origin, dtype=float)
    g = np.asarray(direction, dtype=float)

    denom = float(n @ g)
    if abs(denom) < PARALLEL_TOLERANCE:
        raise NoIntersectionError()
    t = (plane.offset - float(n @ o)) / denom
    if t <= 0:
        raise BehindScreenError()

    local = calib.screen_pose.matrix.T @ (o + t * g - calib.screen_pose.vector)
    if abs(local[2]) > RESIDUAL_TOLERANCE_MM:
        raise ProjectionError(f"Projection residual {local[2]:.3e} mm exceeds tolerance")
    return Point2D(float(local[0]), float(local[1]))


class ScreenProjector:
    """Calibration flattened to floats for per-sample projection."""

    __slots__ = ("_rc_t", "_origin", "_normal", "_offset", "_rs_t", "_ts", "_dist")

    def __init__(self, calib: SceneCalibration):
        self._rc_t = tuple(tuple(map(float, row)) for row in calib.camera_pose.matrix.T)
        self._origin = tuple(map(float, calib.gaze_origin_world()))
        plane = screen_plane(calib)
        self._normal = tuple(plane.normal)
        self._offset = plane.offset
        self._rs_t = tuple(tuple(map(float, row)) for row in calib.screen_pose.matrix.T)
        self._ts = tuple(map(float, calib.screen_pose.vector))
        nx, ny, nz = self._normal
        ox, oy, oz = self._origin
        self._dist = self._offset - (nx * ox + ny * oy + nz * oz)

    def project_angles(self, yaw: float, pitch: float) -> Point2D:
        cp = math.cos(pitch)
        vx, vy, vz = cp * math.sin(yaw), -math.sin(pitch), cp * math.cos(yaw)
        (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = self._rc_t
        gx = a0 * vx + a1 * vy + a2 * vz
        gy = b0 * vx + b1 * vy + b2 * vz
        gz = c0 * vx + c1 * vy + c2 * vz

        nx, ny, nz = self._normal
        denom = nx * gx + ny * gy + nz * gz
        if abs(denom) < PARALLEL_TOLERANCE:
            raise NoIntersectionError()
        t = self._dist / denom
        if t <= 0:
            raise BehindScreenError()

        ox, oy, oz = self._origin
        tx, ty, tz = self._ts
        qx, qy, qz = ox + t * gx - tx, oy + t * gy - ty, oz + t * gz - tz
        (r0, r1, r2), (s0, s1, s2), (u0, u1, u2) = self._rs_t
        z = u0 * qx + u1 * qy + u2 * qz
        if abs(z) > RESIDUAL_TOLERANCE_MM:
            raise ProjectionError(f"Projection residual {z:.3e} mm exceeds tolerance")
        return Point2D(r0 * qx + r1 * qy + r2 * qz, s0 * qx + s1 * qy + s2 * qz)

    def project(self, gaze: EulerGaze) -> Point2D:
        return self.project_angles(gaze.yaw, gaze.pitch)


@lru_cache(maxsize=32)
def projector_for(calib: SceneCalibration) -> ScreenProjector:
    logger.debug("Building screen projector")
    return ScreenProjector(calib)


def project_to_screen(calib: SceneCalibration, gaze: EulerGaze) -> Point2D:
    return projector_for(calib).project(gaze)


def aim_at(calib: SceneCalibration, point: Point2D) -> EulerGaze:
    """Yaw/pitch whose gaze ray hits `point` on the screen."""
    target = calib.screen_pose.matrix @ np.array([point[0], point[1], 0.0]) + calib.screen_pose.vector
    g = target - calib.gaze_origin_world()
    norm = float(np.linalg.norm(g))
    if norm == 0.0:
        raise GeometryError("Target coincides with the gaze origin")
    v = calib.camera_pose.matrix @ (g / norm)
    pitch = math.asin(max(-1.0, min(1.0, -float(v[1]))))
    yaw = math.atan2(float(v[0]), float(v[2]))
    return EulerGaze(yaw, pitch)
