import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from app.consts import AoiLabel
from app.core.exceptions import InvalidAngleError, InvalidSampleError


class Vec3(NamedTuple):
    """Direction (unitless) or position (millimetres)."""
    x: float
    y: float
    z: float


class Point2D(NamedTuple):
    """Millimetres in screen-plane coordinates."""
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class EulerGaze:
    """Yaw/pitch estimate in radians.

    Positive yaw turns the gaze toward the user's left in the camera view,
    positive pitch turns it downward.
    """
    yaw: float
    pitch: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.yaw) and math.isfinite(self.pitch)):
            raise InvalidAngleError(f"Gaze angles must be finite, got yaw={self.yaw!r} pitch={self.pitch!r}")
        if not -math.pi <= self.yaw <= math.pi:
            raise InvalidAngleError(f"Yaw {self.yaw!r} rad outside [-pi, pi]", field="yaw")
        if not -math.pi / 2 <= self.pitch <= math.pi / 2:
            raise InvalidAngleError(f"Pitch {self.pitch!r} rad outside [-pi/2, pi/2]", field="pitch")

    @classmethod
    def from_degrees(cls, yaw_deg: float, pitch_deg: float) -> "EulerGaze":
        return cls(math.radians(yaw_deg), math.radians(pitch_deg))

    @property
    def yaw_deg(self) -> float:
        return math.degrees(self.yaw)

    @property
    def pitch_deg(self) -> float:
        return math.degrees(self.pitch)


@dataclass(frozen=True, slots=True)
class GazeSample:
    timestamp: float
    gaze: EulerGaze
    source_frame_id: Optional[int] = None
    # Set only by offline pipelines that ship pre-labeled samples.
    label: Optional[AoiLabel] = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.timestamp) or self.timestamp < 0:
            raise InvalidSampleError(f"Sample timestamp must be finite and >= 0, got {self.timestamp!r}", field="t")


@dataclass(frozen=True, slots=True)
class TimedGazePoint:
    timestamp: float
    point: Optional[Point2D]
    label: AoiLabel

    def __post_init__(self) -> None:
        if self.point is None and self.label != AoiLabel.ELSEWHERE:
            raise InvalidSampleError("A gaze point without a projection must be labeled elsewhere", field="label")
