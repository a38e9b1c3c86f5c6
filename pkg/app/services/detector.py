"""Windowed-threshold engagement state machine.

Idle -> Engaged when the tablet share of the trailing engage window exceeds
the engage threshold; Engaged -> Disengaged when the face share of the
trailing disengage window exceeds the disengage threshold, or when the page
timeout elapses. Disengaged -> Idle only through `advance_page`.
"""
from collections import deque
from typing import Deque, Optional

from app.consts import WINDOW_EPSILON, AoiLabel, EngagementState, TimeoutScope, TransitionCause
from app.core.exceptions import DetectorStateError, OrderingError
from app.schemas.detector import DetectorConfig, TransitionEvent
from app.schemas.gaze import TimedGazePoint
from app.utils.logging import get_logger, log_with_context

logger = get_logger(__name__)


class SlidingWindow:
    """Samples with timestamp > t - length + WINDOW_EPSILON, counting hits on one label."""

    __slots__ = ("length", "target", "_items", "hits")

    def __init__(self, length: float, target: AoiLabel):
        self.length = length
        self.target = target
        self._items: Deque[tuple[float, bool]] = deque()
        self.hits = 0

    def __len__(self) -> int:
        return len(self._items)

    def push(self, timestamp: float, label: AoiLabel) -> None:
        hit = label == self.target
        self._items.append((timestamp, hit))
        self.hits += hit
        cutoff = timestamp - self.length + WINDOW_EPSILON
        items = self._items
        while items and items[0][0] <= cutoff:
            _, old_hit = items.popleft()
            self.hits -= old_hit

    @property
    def fraction(self) -> float:
        return self.hits / len(self._items) if self._items else 0.0

    def clear(self) -> None:
        self._items.clear()
        self.hits = 0


class EngagementDetector:
    def __init__(self, config: DetectorConfig, page_start: float = 0.0):
        self.config = config
        self.state = EngagementState.IDLE
        self.page_start = page_start
        self.last_timestamp: Optional[float] = None
        self._engage = SlidingWindow(config.engage_window, AoiLabel.TABLET)
        self._disengage = SlidingWindow(config.disengage_window, AoiLabel.FACE)

    def _ready(self, window: SlidingWindow, timestamp: float) -> bool:
        if len(window) < self.config.min_window_samples:
            return False
        if self.config.require_full_window:
            return timestamp - self.page_start >= window.length - WINDOW_EPSILON
        return True

    def _timed_out(self, timestamp: float) -> bool:
        return timestamp - self.page_start >= self.config.timeout - WINDOW_EPSILON

    def _transition(
        self,
        timestamp: float,
        to_state: EngagementState,
        cause: TransitionCause,
        window: Optional[SlidingWindow] = None,
    ) -> TransitionEvent:
        event = TransitionEvent(
            timestamp=timestamp,
            from_state=self.state,
            to_state=to_state,
            cause=cause,
            window_fraction=window.fraction if cause == TransitionCause.GAZE else None,
            window_samples=len(window) if window is not None else 0,
        )
        self.state = to_state
        log_with_context(
            logger, "info", f"{event.from_state} -> {event.to_state}",
            t=timestamp, cause=str(cause), fraction=event.window_fraction,
        )
        return event

    def feed(self, labeled: TimedGazePoint) -> Optional[TransitionEvent]:
        timestamp = labeled.timestamp
        if self.last_timestamp is not None and not timestamp > self.last_timestamp:
            raise OrderingError(self.last_timestamp, timestamp)
        self.last_timestamp = timestamp
        self._engage.push(timestamp, labeled.label)
        self._disengage.push(timestamp, labeled.label)

        cfg = self.config
        if self.state == EngagementState.IDLE:
            window = self._engage
            if self._ready(window, timestamp) and window.fraction > cfg.engage_threshold:
                return self._transition(timestamp, EngagementState.ENGAGED, TransitionCause.GAZE, window)
            if cfg.timeout_scope == TimeoutScope.PAGE and self._timed_out(timestamp):
                return self._transition(timestamp, EngagementState.DISENGAGED, TransitionCause.TIMEOUT, window)
        elif self.state == EngagementState.ENGAGED:
            window = self._disengage
            if self._ready(window, timestamp) and window.fraction > cfg.disengage_threshold:
                return self._transition(timestamp, EngagementState.DISENGAGED, TransitionCause.GAZE, window)
            if self._timed_out(timestamp):
                return self._transition(timestamp, EngagementState.DISENGAGED, TransitionCause.TIMEOUT, window)
        return None

    def advance_page(self, timestamp: float) -> TransitionEvent:
        """Show the next page: Disengaged -> Idle, clearing windows and restarting the page clock."""
        if self.state != EngagementState.DISENGAGED:
            raise DetectorStateError(f"advance_page requires the disengaged state, detector is {self.state}")
        if self.last_timestamp is not None and timestamp < self.last_timestamp:
            raise OrderingError(self.last_timestamp, timestamp)
        self._engage.clear()
        self._disengage.clear()
        self.page_start = timestamp
        return self._transition(timestamp, EngagementState.IDLE, TransitionCause.RESET)
