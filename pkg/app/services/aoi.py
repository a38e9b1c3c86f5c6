from typing import Iterable

from app.consts import AoiLabel
from app.core.exceptions import ProjectionError
from app.schemas.aoi import AoiLayout
from app.schemas.gaze import GazeSample, Point2D, TimedGazePoint
from app.schemas.geometry import SceneCalibration
from app.services.geometry import projector_for
from app.services.smoothing import SmoothingBuffer
from app.utils.logging import get_logger

logger = get_logger(__name__)


def classify(layout: AoiLayout, point: Point2D) -> AoiLabel:
    x, y = point
    if layout.tablet.contains(x, y):
        return AoiLabel.TABLET
    if layout.face.contains(x, y):
        return AoiLabel.FACE
    return AoiLabel.ELSEWHERE


class GazeLabeler:
    """Smoothing, projection and AOI mapping for one sample stream."""

    def __init__(self, layout: AoiLayout, calib: SceneCalibration, smooth_window: int = 3):
        self.layout = layout
        self._projector = projector_for(calib)
        self._buffer = SmoothingBuffer(smooth_window)
        self.projection_failures = 0

    def label(self, sample: GazeSample) -> TimedGazePoint:
        yaw, pitch = self._buffer.push_angles(sample.timestamp, sample.gaze.yaw, sample.gaze.pitch)
        try:
            point = self._projector.project_angles(yaw, pitch)
        except ProjectionError as e:
            self.projection_failures += 1
            logger.debug(f"Sample at t={sample.timestamp} maps to elsewhere: {e.code}")
            return TimedGazePoint(sample.timestamp, None, AoiLabel.ELSEWHERE)
        # Offline logs may carry labels from an external classifier.
        label = sample.label if sample.label is not None else classify(self.layout, point)
        return TimedGazePoint(sample.timestamp, point, label)

    def reset(self) -> None:
        self._buffer.reset()


def label_stream(
    layout: AoiLayout,
    calib: SceneCalibration,
    samples: Iterable[GazeSample],
    smooth_window: int = 3,
) -> list[TimedGazePoint]:
    labeler = GazeLabeler(layout, calib, smooth_window)
    return [labeler.label(sample) for sample in samples]
