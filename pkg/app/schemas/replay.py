from typing import Optional

from pydantic import BaseModel, Field

from app.schemas.detector import DetectorConfig
from app.schemas.records import EventRecord, ReportRecord, SampleRecord


class ReplayRequest(BaseModel):
    samples: list[SampleRecord] = Field(default_factory=list, description="Time-ordered sample records")
    detector: Optional[DetectorConfig] = Field(None, description="Overrides the configured detector parameters")


class ReplayResult(BaseModel):
    events: list[EventRecord] = Field(default_factory=list)
    report: ReportRecord
