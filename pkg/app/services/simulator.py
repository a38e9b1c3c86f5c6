"""Synthetic gaze sessions for testing and parameter search.

Per page the participant optionally checks the new page and looks back at the
robot while it prompts, reads the tablet for a log-normal time with brief
Poisson-timed face glances, then (with probability `shift_to_face`) looks at
the robot's face until the page ends. Each sample hits its target AOI with
the configured true positive rate; misses land uniformly in a margin around
the target, outside it.
"""
import math
from typing import Optional

import numpy as np

from app.consts import FixationTarget
from app.core.exceptions import ConfigError, ProjectionError
from app.schemas.aoi import AoiLayout, AoiRect
from app.schemas.gaze import EulerGaze, GazeSample, Point2D
from app.schemas.geometry import SceneCalibration
from app.schemas.simulation import BehaviorProfile, Fixation, ScriptedPage, ScriptedSession, Trial
from app.services.geometry import aim_at, projector_for
from app.utils.logging import get_logger

logger = get_logger(__name__)

TIME_DECIMALS = 6
ANGLE_DECIMALS = 6
MAX_HIT_DRAWS = 32
MAX_MISS_DRAWS = 256


def _glances(rng: np.random.Generator, start: float, end: float, rate: float, duration: float) -> list[tuple[float, float]]:
    spans = []
    if rate <= 0:
        return spans
    t = start + rng.exponential(1.0 / rate)
    while t < end:
        spans.append((t, min(t + duration, end)))
        t += duration + rng.exponential(1.0 / rate)
    return spans


def _script_page(rng: np.random.Generator, profile: BehaviorProfile, start: float) -> ScriptedPage:
    read = round(float(rng.lognormal(math.log(profile.read_median_s), profile.read_sigma)), TIME_DECIMALS)
    shifts = bool(rng.random() < profile.shift_to_face)
    opening = profile.page_check_s + profile.prompt_s
    if shifts and profile.face_dwell_s:
        length = opening + read + profile.face_dwell_s
    else:
        length = profile.page_duration_s
    end = round(start + length, TIME_DECIMALS)

    fixations = []
    cursor = start
    for target, duration in ((FixationTarget.TABLET, profile.page_check_s), (FixationTarget.FACE, profile.prompt_s)):
        if duration > 0 and cursor < end:
            stop = round(min(cursor + duration, end), TIME_DECIMALS)
            fixations.append(Fixation(target=target, start_s=cursor, duration_s=stop - cursor))
            cursor = stop

    shift_time = round(cursor + read, TIME_DECIMALS) if shifts else None
    if shift_time is not None and shift_time >= end:
        shift_time = None

    reading_end = shift_time if shift_time is not None else end
    for g_start, g_end in _glances(rng, cursor, reading_end, profile.glance_rate_hz, profile.glance_duration_s):
        if g_start > cursor:
            fixations.append(Fixation(target=FixationTarget.TABLET, start_s=cursor, duration_s=g_start - cursor))
        fixations.append(Fixation(target=FixationTarget.FACE, start_s=g_start, duration_s=g_end - g_start))
        cursor = g_end
    if reading_end > cursor:
        fixations.append(Fixation(target=FixationTarget.TABLET, start_s=cursor, duration_s=reading_end - cursor))
    if shift_time is not None:
        fixations.append(Fixation(target=FixationTarget.FACE, start_s=shift_time, duration_s=end - shift_time))
    return ScriptedPage(start_s=start, end_s=end, fixations=fixations, shift_time_s=shift_time)


class _Aimer:
    """Draws yaw/pitch (degrees) for samples fixating a target rectangle."""

    def __init__(self, rng: np.random.Generator, profile: BehaviorProfile,
                 calibration: SceneCalibration, layout: AoiLayout):
        self.rng = rng
        self.profile = profile
        self.calibration = calibration
        self.projector = projector_for(calibration)
        self.layout = layout
        self._centers = {
            target: aim_at(calibration, layout.rect(target).center) for target in FixationTarget
        }

    def _lands_in(self, rect: AoiRect, yaw_deg: float, pitch_deg: float) -> bool:
        try:
            x, y = self.projector.project_angles(math.radians(yaw_deg), math.radians(pitch_deg))
        except ProjectionError:
            return False
        return rect.contains(x, y)

    def _hit(self, target: FixationTarget) -> tuple[float, float]:
        center = self._centers[target]
        rect = self.layout.rect(target)
        yaw, pitch = round(center.yaw_deg, ANGLE_DECIMALS), round(center.pitch_deg, ANGLE_DECIMALS)
        sd = self.profile.angular_noise_sd
        if sd <= 0:
            return yaw, pitch
        for _ in range(MAX_HIT_DRAWS):
            d_yaw, d_pitch = self.rng.normal(0.0, sd, size=2)
            candidate = (round(yaw + float(d_yaw), ANGLE_DECIMALS), round(pitch + float(d_pitch), ANGLE_DECIMALS))
            if self._lands_in(rect, *candidate):
                return candidate
        return yaw, pitch

    def _miss(self, target: FixationTarget) -> tuple[float, float]:
        rect = self.layout.rect(target)
        area = rect.expanded(self.profile.miss_margin_mm)
        for _ in range(MAX_MISS_DRAWS):
            x = float(self.rng.uniform(area.x_min, area.x_max))
            y = float(self.rng.uniform(area.y_min, area.y_max))
            if rect.contains(x, y):
                continue
            gaze = aim_at(self.calibration, Point2D(x, y))
            candidate = (round(gaze.yaw_deg, ANGLE_DECIMALS), round(gaze.pitch_deg, ANGLE_DECIMALS))
            if not self._lands_in(rect, *candidate):
                return candidate
        raise ConfigError("miss_margin_mm leaves no room for off-target samples", field="miss_margin_mm")

    def draw(self, target: FixationTarget) -> tuple[float, float]:
        tpr = self.profile.tablet_tpr if target == FixationTarget.TABLET else self.profile.face_tpr
        if self.rng.random() < tpr:
            return self._hit(target)
        return self._miss(target)


def generate_session(
    profile: BehaviorProfile,
    n_pages: int,
    *,
    calibration: Optional[SceneCalibration] = None,
    layout: Optional[AoiLayout] = None,
) -> tuple[list[GazeSample], ScriptedSession]:
    """Deterministic given (profile, n_pages, calibration, layout)."""
    if n_pages < 1:
        raise ConfigError("n_pages must be at least 1", field="n_pages")
    if calibration is None or layout is None:
        from app.configs.loader import default_app_config
        defaults = default_app_config()
        calibration = calibration or defaults.calibration
        layout = layout or defaults.layout

    rng = np.random.default_rng(profile.seed)
    pages = []
    start = 0.0
    for _ in range(n_pages):
        page = _script_page(rng, profile, start)
        pages.append(page)
        start = page.end_s
    truth = ScriptedSession(pages=pages, sample_rate=profile.sample_rate, seed=profile.seed)

    aimer = _Aimer(rng, profile, calibration, layout)
    samples = []
    end = pages[-1].end_s
    page_index = 0
    k = 0
    # The final page end is sampled so a failsafe timeout on the last page is observable.
    while (t := round(k / profile.sample_rate, TIME_DECIMALS)) <= end:
        while page_index < len(pages) - 1 and t >= pages[page_index].end_s:
            page_index += 1
        target = _target_at(pages[page_index], t)
        yaw, pitch = aimer.draw(target)
        samples.append(GazeSample(timestamp=t, gaze=EulerGaze.from_degrees(yaw, pitch), source_frame_id=k))
        k += 1

    logger.info(
        f"Generated {len(samples)} samples over {n_pages} pages "
        f"({sum(p.shift_time_s is not None for p in pages)} with a face shift), seed={profile.seed}"
    )
    return samples, truth


def _target_at(page: ScriptedPage, t: float) -> FixationTarget:
    if page.shift_time_s is not None and t >= page.shift_time_s:
        return FixationTarget.FACE
    for fixation in page.fixations:
        if fixation.start_s <= t < fixation.end_s:
            return fixation.target
    return FixationTarget.TABLET


def generate_cohort(profile: BehaviorProfile, sessions: int, n_pages: int, **kwargs) -> list[Trial]:
    """`sessions` trials; trial i uses seed + i."""
    trials = []
    for i in range(sessions):
        seeded = profile.model_copy(update={"seed": (profile.seed + i) % 2**64})
        samples, truth = generate_session(seeded, n_pages, **kwargs)
        trials.append(Trial(name=f"session_{i:03d}", samples=tuple(samples), truth=truth))
    return trials
