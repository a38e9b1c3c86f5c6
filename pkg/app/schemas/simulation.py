import math
from dataclasses import dataclass, field
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.consts import DetectionOutcome, FixationTarget
from app.schemas.gaze import GazeSample


class BehaviorProfile(BaseModel):
    """Synthetic participant. Hit rates default to the pretest estimator rates."""
    read_median_s: float = Field(4.0, gt=0, description="Median reading time per page (log-normal), seconds")
    read_sigma: float = Field(0.35, ge=0, description="Log-normal shape of the reading time")
    shift_to_face: float = Field(0.95, ge=0, le=1, description="Probability of looking at the face after reading")
    tablet_tpr: float = Field(0.4, ge=0, le=1, description="Probability a tablet-fixation sample lands on the tablet AOI")
    face_tpr: float = Field(0.5, ge=0, le=1, description="Probability a face-fixation sample lands on the face AOI")
    angular_noise_sd: float = Field(2.0, ge=0, description="Gaussian angular noise of on-target samples, degrees")
    sample_rate: float = Field(5.0, gt=0, description="Samples per second")
    seed: int = Field(0, ge=0, lt=2**64, description="Random seed")
    glance_rate_hz: float = Field(0.0, ge=0, description="Rate of brief face glances while reading, per second")
    glance_duration_s: float = Field(0.8, gt=0, description="Length of one face glance, seconds")
    page_check_s: float = Field(0.0, ge=0, description="Look at a newly shown page before the prompt, seconds")
    prompt_s: float = Field(0.0, ge=0, description="Face fixation after the page check while the robot prompts, seconds")
    page_duration_s: float = Field(10.0, gt=0, description="Page length when no face dwell is set, seconds")
    face_dwell_s: Optional[float] = Field(None, gt=0, description="Face fixation after reading before the page ends")
    miss_margin_mm: float = Field(200.0, gt=0, description="Margin around the target that off-target samples fall into")

    model_config = ConfigDict(frozen=True)


class Fixation(BaseModel):
    target: FixationTarget
    start_s: float = Field(..., ge=0)
    duration_s: float = Field(..., gt=0)

    model_config = ConfigDict(frozen=True)

    @property
    def end_s(self) -> float:
        return self.start_s + self.duration_s


class ScriptedPage(BaseModel):
    start_s: float = Field(..., ge=0, description="Page display time, seconds")
    end_s: float = Field(..., description="Time the next page is displayed, seconds")
    fixations: list[Fixation] = Field(default_factory=list)
    shift_time_s: Optional[float] = Field(None, description="Ground-truth move from tablet to face; None if never")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_span(self) -> "ScriptedPage":
        if not self.end_s > self.start_s:
            raise ValueError("page end must follow its start")
        if self.shift_time_s is not None and not self.start_s <= self.shift_time_s <= self.end_s:
            raise ValueError("shift time outside the page span")
        return self


class ScriptedSession(BaseModel):
    pages: list[ScriptedPage] = Field(default_factory=list)
    sample_rate: Optional[float] = Field(None, gt=0)
    seed: Optional[int] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_order(self) -> "ScriptedSession":
        for prev, page in zip(self.pages, self.pages[1:]):
            if page.start_s < prev.end_s:
                raise ValueError("pages overlap")
        return self

    @property
    def ground_truth_shift_times(self) -> list[Optional[float]]:
        return [page.shift_time_s for page in self.pages]


class PageOutcome(BaseModel):
    page: int = Field(..., ge=0)
    outcome: DetectionOutcome
    shift_time_s: Optional[float] = None
    detection_time_s: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @property
    def latency_s(self) -> float:
        if self.outcome not in (DetectionOutcome.CORRECT, DetectionOutcome.LATE):
            return math.nan
        return self.detection_time_s - self.shift_time_s


@dataclass(frozen=True)
class Trial:
    """One recorded or simulated session with its ground truth."""
    name: str
    samples: tuple[GazeSample, ...] = field(repr=False)
    truth: ScriptedSession = field(repr=False)


class SimulationPreset(BaseModel):
    """A cohort definition: one profile replayed over several seeded sessions."""
    profile: BehaviorProfile = Field(default_factory=BehaviorProfile)
    sessions: int = Field(1, ge=1, description="Number of sessions; session i uses seed + i")
    pages: int = Field(6, ge=1, description="Pages per session")
    tolerance: Optional[float] = Field(None, ge=0, description="Timing-aware accuracy window, seconds")

    model_config = ConfigDict(frozen=True)
