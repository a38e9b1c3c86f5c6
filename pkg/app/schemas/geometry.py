import math
from typing import Any, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.schemas.gaze import Vec3

ORTHONORMAL_TOLERANCE = 1e-6
# Minimum distance between the gaze origin and the screen plane, millimetres.
MIN_ORIGIN_DISTANCE_MM = 1.0

Row3 = tuple[float, float, float]


class ScreenPlane(NamedTuple):
    normal: Vec3
    offset: float


class RigidPose(BaseModel):
    """Rotation and translation (millimetres) of a rigid frame."""
    rotation: tuple[Row3, Row3, Row3] = Field(
        ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
        description="3x3 rotation matrix; a flat row-major list of 9 numbers is accepted",
    )
    translation: Row3 = Field((0.0, 0.0, 0.0), description="Translation in millimetres")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "rotation": [-1, 0, 0, 0, 1, 0, 0, 0, -1],
                "translation": [0, 0, 0],
            }
        },
    )

    @field_validator("rotation", mode="before")
    @classmethod
    def _reshape_flat_rotation(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)) and len(value) == 9 and not isinstance(value[0], (list, tuple)):
            return tuple(tuple(value[i:i + 3]) for i in range(0, 9, 3))
        return value

    @model_validator(mode="after")
    def _check_rotation(self) -> "RigidPose":
        r = self.matrix
        t = np.asarray(self.translation, dtype=float)
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(t))):
            raise ValueError("pose values must be finite")
        if not np.allclose(r @ r.T, np.eye(3), rtol=0.0, atol=ORTHONORMAL_TOLERANCE):
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > ORTHONORMAL_TOLERANCE:
            raise ValueError("rotation determinant is not +1")
        return self

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float)

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=float)

    @classmethod
    def about_axis(cls, axis: str, degrees: float, translation: Row3 = (0.0, 0.0, 0.0)) -> "RigidPose":
        """Pose rotated about a principal axis. Exact quarter turns produce exact matrices."""
        quarter, rest = divmod(degrees, 90.0)
        if rest == 0.0:
            c, s = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[int(quarter) % 4]
        else:
            c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
        match axis:
            case "x":
                rows = ((1.0, 0.0, 0.0), (0.0, c, -s), (0.0, s, c))
            case "y":
                rows = ((c, 0.0, s), (0.0, 1.0, 0.0), (-s, 0.0, c))
            case "z":
                rows = ((c, -s, 0.0), (s, c, 0.0), (0.0, 0.0, 1.0))
            case _:
                raise ValueError(f"unknown axis {axis!r}")
        return cls(rotation=rows, translation=translation)


class SceneCalibration(BaseModel):
    """Screen and camera poses plus an optional fixed eye position.

    World coordinates are defined by the screen pose: a point s in screen
    coordinates sits at R_s s + T_s. The camera maps world points w to
    R_c w + T_c. `eye_origin` is given in screen coordinates.
    """
    screen_pose: RigidPose = Field(default_factory=RigidPose, description="Screen pose {R_s, T_s}")
    camera_pose: RigidPose = Field(default_factory=RigidPose, description="Camera pose {R_c, T_c}")
    eye_origin_override: Optional[Row3] = Field(
        None,
        alias="eye_origin",
        description="Fixed eye position in screen coordinates, millimetres",
    )

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @model_validator(mode="after")
    def _origin_off_screen(self) -> "SceneCalibration":
        if self.eye_origin_override is not None and not all(math.isfinite(v) for v in self.eye_origin_override):
            raise ValueError("eye_origin must be finite")
        normal = self.screen_pose.matrix[:, 2]
        offset = float(normal @ self.screen_pose.vector)
        distance = abs(float(normal @ self.gaze_origin_world()) - offset)
        if distance <= MIN_ORIGIN_DISTANCE_MM:
            raise ValueError(f"gaze origin lies {distance:.3f} mm from the screen plane")
        return self

    def gaze_origin_world(self) -> np.ndarray:
        if self.eye_origin_override is not None:
            return self.screen_pose.matrix @ np.asarray(self.eye_origin_override, dtype=float) + self.screen_pose.vector
        return -(self.camera_pose.matrix.T @ self.camera_pose.vector)
