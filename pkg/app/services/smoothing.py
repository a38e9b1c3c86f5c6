import math
from collections import deque
from typing import Deque, Optional

from app.core.exceptions import ConfigError, OrderingError
from app.schemas.gaze import EulerGaze, GazeSample


class SmoothingBuffer:
    """Frame-indexed moving average over the last N yaw/pitch estimates.

    Before N samples have arrived the mean of the available samples is used.
    """

    __slots__ = ("capacity", "_yaw", "_pitch", "_last_ts")

    def __init__(self, capacity: int = 3):
        if capacity < 1:
            raise ConfigError("smoothing window must be a positive integer", field="smooth_window")
        self.capacity = capacity
        self._yaw: Deque[float] = deque(maxlen=capacity)
        self._pitch: Deque[float] = deque(maxlen=capacity)
        self._last_ts: Optional[float] = None

    def __len__(self) -> int:
        return len(self._yaw)

    def push_angles(self, timestamp: float, yaw: float, pitch: float) -> tuple[float, float]:
        if self._last_ts is not None and not timestamp > self._last_ts:
            raise OrderingError(self._last_ts, timestamp)
        self._last_ts = timestamp
        self._yaw.append(yaw)
        self._pitch.append(pitch)
        if self.capacity == 1:
            return yaw, pitch
        n = len(self._yaw)
        return math.fsum(self._yaw) / n, math.fsum(self._pitch) / n

    def push_and_smooth(self, sample: GazeSample) -> GazeSample:
        yaw, pitch = self.push_angles(sample.timestamp, sample.gaze.yaw, sample.gaze.pitch)
        return GazeSample(
            timestamp=sample.timestamp,
            gaze=EulerGaze(yaw, pitch),
            source_frame_id=sample.source_frame_id,
            label=sample.label,
        )

    def reset(self) -> None:
        """Drop buffered values. Ordering is still enforced against the last timestamp."""
        self._yaw.clear()
        self._pitch.clear()
