import pytest

from app.consts import EngagementState, TransitionCause
from app.core.exceptions import OrderingError
from app.schemas.detector import DetectorConfig
from app.schemas.records import EventRecord
from app.services.session import SessionPipeline, run_session
from app.services.sessionio import encode_record, read_sample_log
from tests.helpers import samples_from_pitches

TABLET_PITCH = 19.0
FACE_PITCH = 0.0


def shift_session(shift_index: int = 20, total: int = 40):
    return samples_from_pitches([TABLET_PITCH] * shift_index + [FACE_PITCH] * (total - shift_index))


def turn_time(events) -> float:
    return next(e.timestamp for e in events if e.is_turn)


def test_golden_session_events(golden_dir, golden_config):
    samples = read_sample_log(golden_dir / "session.samples.jsonl").gaze_samples()
    events = run_session(golden_config.detector, golden_config.layout, golden_config.calibration, samples)
    lines = [encode_record(EventRecord.from_event(e)) for e in events]
    expected = (golden_dir / "session.stdout.jsonl").read_text().splitlines()[:-1]
    assert lines == expected


def test_turn_is_followed_by_reset_at_same_time(layout, front_calibration, detector_config):
    events = run_session(detector_config, layout, front_calibration, shift_session())
    turn_index = next(i for i, e in enumerate(events) if e.is_turn)
    reset = events[turn_index + 1]
    assert reset.cause == TransitionCause.RESET
    assert reset.timestamp == events[turn_index].timestamp


@pytest.mark.parametrize(
    "disengage_window, expected",
    [(0.5, 4.6), (1.0, 4.8), (1.5, 5.2), (2.0, 5.4), (3.0, 5.8)],
)
def test_noise_free_latency_per_window(layout, front_calibration, disengage_window, expected):
    config = DetectorConfig(disengage_window=disengage_window)
    events = run_session(config, layout, front_calibration, shift_session())
    assert turn_time(events) == pytest.approx(expected)


def test_full_window_delays_engagement_only(layout, front_calibration):
    partial = run_session(DetectorConfig(), layout, front_calibration, shift_session())
    full = run_session(DetectorConfig(require_full_window=True), layout, front_calibration, shift_session())
    assert (partial[0].timestamp, partial[0].to_state) == (pytest.approx(0.2), EngagementState.ENGAGED)
    assert (full[0].timestamp, full[0].to_state) == (pytest.approx(1.0), EngagementState.ENGAGED)
    assert turn_time(full) == pytest.approx(4.8)
    assert turn_time(full) <= 5.0


def test_latency_grows_with_smoothing(layout, front_calibration):
    times = [
        turn_time(run_session(DetectorConfig(smooth_window=n), layout, front_calibration, shift_session()))
        for n in (1, 3, 5, 10)
    ]
    assert times == sorted(times)
    assert times[0] < times[-1]


def test_all_elsewhere_session_has_no_events(layout, front_calibration, detector_config):
    samples = samples_from_pitches([60.0] * 80)
    assert run_session(detector_config, layout, front_calibration, samples) == []


def test_timeout_advances_the_page(layout, front_calibration, detector_config):
    events = run_session(detector_config, layout, front_calibration, samples_from_pitches([TABLET_PITCH] * 60))
    assert [(e.timestamp, e.to_state, e.cause) for e in events] == [
        (0.2, EngagementState.ENGAGED, TransitionCause.GAZE),
        (10.0, EngagementState.DISENGAGED, TransitionCause.TIMEOUT),
        (10.0, EngagementState.IDLE, TransitionCause.RESET),
        (10.4, EngagementState.ENGAGED, TransitionCause.GAZE),
    ]


def test_pipeline_report(layout, front_calibration, detector_config):
    pipeline = SessionPipeline(detector_config, layout, front_calibration)
    for sample in shift_session():
        pipeline.process(sample)
    report = pipeline.report()
    assert (report.samples, report.turns, report.gaze_turns, report.timeout_turns) == (40, 1, 1, 0)
    assert report.success_rate == 1.0
    assert report.page_durations == [pytest.approx(4.8)]
    assert report.final_state == EngagementState.IDLE


def test_pipeline_rejects_out_of_order_samples(layout, front_calibration, detector_config):
    pipeline = SessionPipeline(detector_config, layout, front_calibration)
    samples = shift_session()
    pipeline.process(samples[1])
    with pytest.raises(OrderingError):
        pipeline.process(samples[0])


def test_pipeline_keeps_labeled_points(layout, front_calibration, detector_config):
    pipeline = SessionPipeline(detector_config, layout, front_calibration, keep_points=True)
    for sample in shift_session(total=25):
        pipeline.process(sample)
    assert len(pipeline.points) == 25
