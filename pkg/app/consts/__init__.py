from app.consts.gaze import (
    DEFAULT_TOLERANCE_S,
    LOG_FORMAT_VERSION,
    WINDOW_EPSILON,
    AoiLabel,
    DetectionOutcome,
    EngagementState,
    FixationTarget,
    TimeoutScope,
    TransitionCause,
)

__all__ = [
    "DEFAULT_TOLERANCE_S",
    "LOG_FORMAT_VERSION",
    "WINDOW_EPSILON",
    "AoiLabel",
    "DetectionOutcome",
    "EngagementState",
    "FixationTarget",
    "TimeoutScope",
    "TransitionCause",
]
