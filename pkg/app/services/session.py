from typing import Iterable, Optional

from app.consts import EngagementState
from app.schemas.aoi import AoiLayout
from app.schemas.detector import DetectorConfig, TransitionEvent
from app.schemas.gaze import GazeSample, TimedGazePoint
from app.schemas.geometry import SceneCalibration
from app.schemas.records import ReportRecord
from app.services.analytics import session_report
from app.services.aoi import GazeLabeler
from app.services.detector import EngagementDetector
from app.utils.logging import get_logger

logger = get_logger(__name__)


class SessionPipeline:
    """Smoothing, projection, AOI mapping and detection for one session.

    A disengagement advances the page at the same timestamp, so each turn
    yields two events.
    """

    def __init__(
        self,
        config: DetectorConfig,
        layout: AoiLayout,
        calibration: SceneCalibration,
        *,
        session_start: float = 0.0,
        keep_points: bool = False,
    ):
        self.config = config
        self.session_start = session_start
        self.labeler = GazeLabeler(layout, calibration, config.smooth_window)
        self.detector = EngagementDetector(config, page_start=session_start)
        self.events: list[TransitionEvent] = []
        self.points: Optional[list[TimedGazePoint]] = [] if keep_points else None
        self.samples = 0

    @property
    def state(self) -> EngagementState:
        return self.detector.state

    @property
    def last_timestamp(self) -> Optional[float]:
        return self.detector.last_timestamp

    def process(self, sample: GazeSample) -> list[TransitionEvent]:
        point = self.labeler.label(sample)
        event = self.detector.feed(point)
        self.samples += 1
        if self.points is not None:
            self.points.append(point)
        if event is None:
            return []
        self.events.append(event)
        if event.is_turn:
            return [event, self.advance_page(sample.timestamp)]
        return [event]

    def advance_page(self, timestamp: float) -> TransitionEvent:
        event = self.detector.advance_page(timestamp)
        self.labeler.reset()
        self.events.append(event)
        return event

    def report(self) -> ReportRecord:
        summary = session_report(self.events, session_start=self.session_start)
        return ReportRecord(
            samples=self.samples,
            turns=summary.turns,
            gaze_turns=summary.gaze_turns,
            timeout_turns=summary.timeout_turns,
            success_rate=summary.success_rate,
            page_durations=summary.page_durations,
            final_state=self.state,
        )


def run_session(
    config: DetectorConfig,
    layout: AoiLayout,
    calib: SceneCalibration,
    samples: Iterable[GazeSample],
) -> list[TransitionEvent]:
    pipeline = SessionPipeline(config, layout, calib)
    for sample in samples:
        pipeline.process(sample)
    logger.debug(f"Session of {pipeline.samples} samples produced {len(pipeline.events)} events")
    return pipeline.events
