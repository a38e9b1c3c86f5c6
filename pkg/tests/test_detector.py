from itertools import product

import pytest

from app.consts import WINDOW_EPSILON, AoiLabel, EngagementState, TimeoutScope, TransitionCause
from app.core.exceptions import DetectorStateError, OrderingError
from app.schemas.detector import DetectorConfig, TransitionEvent
from app.services.detector import EngagementDetector, SlidingWindow
from tests.helpers import labeled, timestamps

IDLE, ENGAGED, DISENGAGED = EngagementState.IDLE, EngagementState.ENGAGED, EngagementState.DISENGAGED


def run(detector: EngagementDetector, letters: str, start: float = 0.0) -> list[TransitionEvent]:
    events = []
    for point in labeled(letters, start=start):
        event = detector.feed(point)
        if event is not None:
            events.append(event)
    return events


def brute_force(letters: str, cfg: DetectorConfig) -> list[tuple[float, EngagementState, EngagementState]]:
    """Windows recomputed from scratch at every sample."""
    ts = timestamps(len(letters))
    state = IDLE
    out = []
    for i, t in enumerate(ts):
        def window(length: float) -> list[str]:
            return [letters[j] for j in range(i + 1) if ts[j] > t - length + 1e-9]

        if state == IDLE:
            members = window(cfg.engage_window)
            if len(members) >= cfg.min_window_samples and members.count("T") / len(members) > cfg.engage_threshold:
                out.append((t, IDLE, ENGAGED))
                state = ENGAGED
        elif state == ENGAGED:
            members = window(cfg.disengage_window)
            if len(members) >= cfg.min_window_samples and members.count("F") / len(members) > cfg.disengage_threshold:
                out.append((t, ENGAGED, DISENGAGED))
                state = DISENGAGED
    return out


def test_exhaustive_equivalence_with_brute_force(detector_config):
    mismatches = []
    for letters in map("".join, product("TFE", repeat=8)):
        events = run(EngagementDetector(detector_config), letters)
        got = [(e.timestamp, e.from_state, e.to_state) for e in events]
        if got != brute_force(letters, detector_config):
            mismatches.append(letters)
    assert mismatches == []


class TestSlidingWindow:
    def test_holds_window_length_times_rate_samples(self):
        window = SlidingWindow(1.0, AoiLabel.FACE)
        for t in timestamps(20):
            window.push(t, AoiLabel.FACE)
        assert len(window) == 5
        assert window.fraction == 1.0

    def test_hit_count_follows_eviction(self):
        window = SlidingWindow(0.5, AoiLabel.TABLET)
        for point in labeled("TTTFF"):
            window.push(point.timestamp, point.label)
        assert len(window) == 3
        assert window.hits == 1
        window.clear()
        assert len(window) == 0 and window.fraction == 0.0

    def test_epsilon_guard(self):
        assert WINDOW_EPSILON == 1e-9

    def test_window_shorter_than_the_guard_stays_empty(self):
        window = SlidingWindow(WINDOW_EPSILON / 10, AoiLabel.TABLET)
        for point in labeled("TTT"):
            window.push(point.timestamp, point.label)
        assert len(window) == 0
        assert window.hits == 0 and window.fraction == 0.0


class TestEngagement:
    def test_engages_on_second_tablet_sample(self, detector_config):
        events = run(EngagementDetector(detector_config), "TTTT")
        assert len(events) == 1
        assert events[0].timestamp == 0.2
        assert events[0].cause == TransitionCause.GAZE
        assert events[0].window_fraction == 1.0
        assert events[0].window_samples == 2

    def test_single_sample_never_triggers(self, detector_config):
        detector = EngagementDetector(detector_config)
        assert run(detector, "T") == []
        assert detector.state == IDLE

    def test_threshold_must_be_exceeded(self):
        cfg = DetectorConfig(engage_threshold=0.4)
        # the one-second window never holds more than 2 of 5 tablet samples
        events = run(EngagementDetector(cfg), "EEETETE")
        assert events == []

    def test_full_window_option_waits_for_the_window(self):
        cfg = DetectorConfig(require_full_window=True)
        events = run(EngagementDetector(cfg), "T" * 8)
        assert [e.timestamp for e in events] == [1.0]


class TestDisengagement:
    def test_face_majority_disengages(self, detector_config):
        events = run(EngagementDetector(detector_config), "TTTTTFFF")
        assert [(e.timestamp, e.to_state) for e in events] == [(0.2, ENGAGED), (1.4, DISENGAGED)]
        assert events[1].window_fraction == pytest.approx(0.6)
        assert events[1].is_gaze_turn

    def test_disengaged_is_absorbing_until_page_advance(self, detector_config):
        detector = EngagementDetector(detector_config)
        run(detector, "TTTTTFFF")
        assert run(detector, "TTTTT", start=1.6) == []
        assert detector.state == DISENGAGED

    def test_gaze_check_precedes_timeout(self, detector_config):
        letters = "T" * 48 + "F" * 3
        events = run(EngagementDetector(detector_config), letters)
        assert events[-1].timestamp == 10.0
        assert events[-1].cause == TransitionCause.GAZE

    def test_timeout_while_engaged(self, detector_config):
        events = run(EngagementDetector(detector_config), "T" * 60)
        assert [(e.timestamp, e.cause) for e in events] == [
            (0.2, TransitionCause.GAZE),
            (10.0, TransitionCause.TIMEOUT),
        ]
        assert events[1].window_fraction is None
        assert events[1].window_samples == 5
        assert events[1].is_turn and not events[1].is_gaze_turn

    def test_no_timeout_from_idle_by_default(self, detector_config):
        detector = EngagementDetector(detector_config)
        assert run(detector, "E" * 60) == []
        assert detector.state == IDLE

    def test_page_scope_timeout_from_idle(self):
        cfg = DetectorConfig(timeout_scope=TimeoutScope.PAGE)
        events = run(EngagementDetector(cfg), "E" * 60)
        assert [(e.timestamp, e.from_state, e.to_state, e.cause) for e in events] == [
            (10.0, IDLE, DISENGAGED, TransitionCause.TIMEOUT)
        ]


class TestPageAdvance:
    def test_reset_clears_windows_and_restarts_clock(self, detector_config):
        detector = EngagementDetector(detector_config)
        run(detector, "TTTTTFFF")
        reset = detector.advance_page(1.4)
        assert (reset.from_state, reset.to_state, reset.cause) == (DISENGAGED, IDLE, TransitionCause.RESET)
        assert reset.window_samples == 0
        assert detector.page_start == 1.4
        events = run(detector, "TT", start=1.6)
        assert [e.timestamp for e in events] == [1.8]

    def test_advance_requires_disengaged(self, detector_config):
        detector = EngagementDetector(detector_config)
        with pytest.raises(DetectorStateError):
            detector.advance_page(0.0)

    def test_timeout_measured_from_page_start(self, detector_config):
        detector = EngagementDetector(detector_config, page_start=5.0)
        events = run(detector, "T" * 80)
        assert events[-1].cause == TransitionCause.TIMEOUT
        assert events[-1].timestamp == 15.0


def test_out_of_order_sample_rejected(detector_config):
    detector = EngagementDetector(detector_config)
    run(detector, "TT")
    with pytest.raises(OrderingError):
        detector.feed(labeled("T")[0])


def test_timeout_must_exceed_disengage_window():
    with pytest.raises(ValueError):
        DetectorConfig(timeout=1.0, disengage_window=1.0)


@pytest.mark.parametrize("field", ["engage_window", "disengage_window"])
def test_window_lengths_must_exceed_the_guard(field):
    with pytest.raises(ValueError):
        DetectorConfig(**{field: 1e-10})


def test_event_fraction_only_for_gaze():
    with pytest.raises(ValueError):
        TransitionEvent(timestamp=0.0, from_state=IDLE, to_state=ENGAGED, cause=TransitionCause.RESET,
                        window_fraction=0.5)
