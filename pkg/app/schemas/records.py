"""Line records shared by the log files and the stream protocol.

Every record is one JSON object per line with a `type` discriminator.
"""
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from app.consts import LOG_FORMAT_VERSION, AoiLabel, EngagementState, TransitionCause
from app.schemas.detector import TransitionEvent
from app.schemas.gaze import EulerGaze, GazeSample

ANGLE_DECIMALS = 6

_record_config = ConfigDict(frozen=True, extra="ignore")


class HeaderRecord(BaseModel):
    type: Literal["header"] = "header"
    version: int = LOG_FORMAT_VERSION
    kind: Literal["samples", "events"]
    sample_rate: Optional[float] = Field(None, gt=0, description="Nominal rate hint, Hz")
    calibration: Optional[str] = Field(None, description="Reference to the calibration used")

    model_config = _record_config


class SampleRecord(BaseModel):
    type: Literal["sample"] = "sample"
    t: float = Field(..., description="Seconds since session start")
    yaw_deg: float
    pitch_deg: float
    frame_id: Optional[int] = None
    label: Optional[AoiLabel] = None

    model_config = _record_config

    @classmethod
    def from_sample(cls, sample: GazeSample) -> "SampleRecord":
        return cls(
            t=sample.timestamp,
            yaw_deg=round(sample.gaze.yaw_deg, ANGLE_DECIMALS),
            pitch_deg=round(sample.gaze.pitch_deg, ANGLE_DECIMALS),
            frame_id=sample.source_frame_id,
            label=sample.label,
        )

    def to_sample(self) -> GazeSample:
        return GazeSample(
            timestamp=self.t,
            gaze=EulerGaze.from_degrees(self.yaw_deg, self.pitch_deg),
            source_frame_id=self.frame_id,
            label=self.label,
        )


class EventRecord(BaseModel):
    type: Literal["event"] = "event"
    t: float
    from_state: EngagementState
    to_state: EngagementState
    cause: TransitionCause
    window_fraction: Optional[float] = None
    window_samples: int = 0

    model_config = _record_config

    @classmethod
    def from_event(cls, event: TransitionEvent) -> "EventRecord":
        return cls(
            t=event.timestamp,
            from_state=event.from_state,
            to_state=event.to_state,
            cause=event.cause,
            window_fraction=event.window_fraction,
            window_samples=event.window_samples,
        )

    def to_event(self) -> TransitionEvent:
        return TransitionEvent(
            timestamp=self.t,
            from_state=self.from_state,
            to_state=self.to_state,
            cause=self.cause,
            window_fraction=self.window_fraction,
            window_samples=self.window_samples,
        )


class HeartbeatRecord(BaseModel):
    type: Literal["heartbeat"] = "heartbeat"
    state: EngagementState
    t: Optional[float] = Field(None, description="Timestamp of the last processed sample")

    model_config = _record_config


class ErrorRecord(BaseModel):
    type: Literal["error"] = "error"
    code: str
    message: str
    line: Optional[int] = None

    model_config = _record_config


class ReportRecord(BaseModel):
    type: Literal["report"] = "report"
    samples: int = Field(0, ge=0)
    turns: int = Field(0, ge=0)
    gaze_turns: int = Field(0, ge=0)
    timeout_turns: int = Field(0, ge=0)
    success_rate: float = 0.0
    page_durations: list[float] = Field(default_factory=list)
    final_state: EngagementState = EngagementState.IDLE

    model_config = _record_config


Record = Annotated[
    Union[HeaderRecord, SampleRecord, EventRecord, HeartbeatRecord, ErrorRecord, ReportRecord],
    Field(discriminator="type"),
]

record_adapter: TypeAdapter[Record] = TypeAdapter(Record)


class SampleLog(BaseModel):
    header: HeaderRecord = Field(default_factory=lambda: HeaderRecord(kind="samples"))
    records: list[SampleRecord] = Field(default_factory=list)

    def gaze_samples(self) -> list[GazeSample]:
        return [record.to_sample() for record in self.records]


class EventLog(BaseModel):
    header: HeaderRecord = Field(default_factory=lambda: HeaderRecord(kind="events"))
    records: list[EventRecord] = Field(default_factory=list)

    def events(self) -> list[TransitionEvent]:
        return [record.to_event() for record in self.records]
