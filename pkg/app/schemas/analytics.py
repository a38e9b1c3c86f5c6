from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.consts import AoiLabel
from app.schemas.simulation import PageOutcome


class DwellStats(BaseModel):
    """Sample counts per AOI; `fractions` is None when there are no samples."""
    total: int = Field(0, ge=0)
    counts: dict[AoiLabel, int] = Field(default_factory=lambda: {label: 0 for label in AoiLabel})
    fractions: Optional[dict[AoiLabel, float]] = None
    pages: list["DwellStats"] = Field(default_factory=list, description="Per-page breakdown")


class HeatmapBounds(BaseModel):
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _non_degenerate(self) -> "HeatmapBounds":
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("heatmap bounds are degenerate")
        return self


class HeatmapGrid(BaseModel):
    """2D gaze histogram. Row 0 covers the lowest y band."""
    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    cell_size: float = Field(..., gt=0, description="Cell edge, millimetres")
    bounds: HeatmapBounds
    counts: list[list[int]]
    in_bounds: int = Field(0, ge=0)
    out_of_bounds: int = Field(0, ge=0, description="Projected points outside the bounds")
    missing: int = Field(0, ge=0, description="Samples without a projected point")


class SessionReport(BaseModel):
    turns: int = Field(0, ge=0, description="Transitions into Disengaged")
    gaze_turns: int = Field(0, ge=0)
    timeout_turns: int = Field(0, ge=0)
    success_rate: float = Field(0.0, ge=0, le=1)
    page_durations: list[float] = Field(default_factory=list, description="Advance time minus page start, seconds")
    outcomes: Optional[list[PageOutcome]] = None
    timing_accuracy: Optional[float] = None


class CorpusSummary(BaseModel):
    sessions: int = Field(0, ge=0)
    turns: int = Field(0, ge=0)
    gaze_turns: int = Field(0, ge=0)
    mean_success: Optional[float] = None
    median_success: Optional[float] = None
    pooled_success: float = 0.0
