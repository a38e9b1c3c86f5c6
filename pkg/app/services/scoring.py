import math
from typing import Iterable, Sequence

from app.consts import DetectionOutcome, TransitionCause
from app.core.exceptions import AppError
from app.schemas.detector import TransitionEvent
from app.schemas.simulation import PageOutcome, ScriptedSession


def evaluate_detection(
    truth: ScriptedSession,
    events: Sequence[TransitionEvent],
    tolerance_window: float,
) -> list[PageOutcome]:
    """Score the first page turn detected inside each scripted page.

    Page i owns turns in (start_i, end_i]; the first page also owns its start.
    A gaze turn is early before the shift (or on a page without one), correct
    within [shift, shift + tolerance_window] and late afterwards. A timeout
    turn or no turn at all is missed.
    """
    if tolerance_window < 0 or not math.isfinite(tolerance_window):
        raise AppError("tolerance_window must be a finite non-negative number of seconds",
                       code="invalid_argument", field="tolerance_window")
    turns = [event for event in events if event.is_turn]
    outcomes = []
    for index, page in enumerate(truth.pages):
        detection = next(
            (
                event for event in turns
                if (page.start_s < event.timestamp or (index == 0 and event.timestamp == page.start_s))
                and event.timestamp <= page.end_s
            ),
            None,
        )
        shift = page.shift_time_s
        if detection is None or detection.cause != TransitionCause.GAZE:
            outcome = DetectionOutcome.MISSED
        elif shift is None or detection.timestamp < shift:
            outcome = DetectionOutcome.EARLY
        elif detection.timestamp <= shift + tolerance_window:
            outcome = DetectionOutcome.CORRECT
        else:
            outcome = DetectionOutcome.LATE
        outcomes.append(
            PageOutcome(
                page=index,
                outcome=outcome,
                shift_time_s=shift,
                detection_time_s=detection.timestamp if detection is not None else None,
            )
        )
    return outcomes


def timing_accuracy(outcomes: Sequence[PageOutcome]) -> float:
    if not outcomes:
        return 0.0
    return sum(o.outcome == DetectionOutcome.CORRECT for o in outcomes) / len(outcomes)


def count_turns(events: Iterable[TransitionEvent]) -> tuple[int, int]:
    """(page turns, gaze-caused Engaged -> Disengaged turns)."""
    turns = gaze = 0
    for event in events:
        if event.is_turn:
            turns += 1
            gaze += event.is_gaze_turn
    return turns, gaze


def success_rate(sessions: Iterable[Sequence[TransitionEvent]]) -> float:
    """Share of page turns caused by gaze, pooled over sessions. No turns gives 0.0."""
    turns = gaze = 0
    for events in sessions:
        t, g = count_turns(events)
        turns += t
        gaze += g
    return gaze / turns if turns else 0.0
