from enum import StrEnum

# Trailing-window membership guard (seconds): a sample belongs to the window ending at t
# when its timestamp exceeds t - W + WINDOW_EPSILON.
WINDOW_EPSILON = 1e-9

# Format version written to every log header.
LOG_FORMAT_VERSION = 1

# Timing-aware accuracy window used when neither a flag nor a preset gives one.
DEFAULT_TOLERANCE_S = 2.0


class AoiLabel(StrEnum):
    TABLET = "tablet"
    FACE = "face"
    ELSEWHERE = "elsewhere"


class EngagementState(StrEnum):
    IDLE = "idle"
    ENGAGED = "engaged"
    DISENGAGED = "disengaged"


class TransitionCause(StrEnum):
    GAZE = "gaze"
    TIMEOUT = "timeout"
    RESET = "reset"


class TimeoutScope(StrEnum):
    ENGAGED = "engaged"
    PAGE = "page"


class DetectionOutcome(StrEnum):
    CORRECT = "correct"
    EARLY = "early"
    LATE = "late"
    MISSED = "missed"


class FixationTarget(StrEnum):
    TABLET = "tablet"
    FACE = "face"
