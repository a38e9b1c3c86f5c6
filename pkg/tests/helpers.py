from typing import Iterable, Sequence

from app.consts import AoiLabel
from app.schemas.gaze import EulerGaze, GazeSample, Point2D, TimedGazePoint

RATE = 5.0
LETTERS = {"T": AoiLabel.TABLET, "F": AoiLabel.FACE, "E": AoiLabel.ELSEWHERE}


def timestamps(n: int, rate: float = RATE, start: float = 0.0) -> list[float]:
    return [round(start + k / rate, 6) for k in range(n)]


def samples_from_pitches(pitches_deg: Sequence[float], rate: float = RATE, yaw_deg: float = 0.0,
                         start: float = 0.0) -> list[GazeSample]:
    return [
        GazeSample(timestamp=t, gaze=EulerGaze.from_degrees(yaw_deg, pitch), source_frame_id=k)
        for k, (t, pitch) in enumerate(zip(timestamps(len(pitches_deg), rate, start), pitches_deg))
    ]


def labeled(letters: Iterable[str], rate: float = RATE, start: float = 0.0) -> list[TimedGazePoint]:
    """'TTFE' -> labeled points at `rate` Hz; elsewhere points carry no projection."""
    letters = list(letters)
    return [
        TimedGazePoint(t, None if c == "E" else Point2D(0.0, 0.0), LETTERS[c])
        for t, c in zip(timestamps(len(letters), rate, start), letters)
    ]
