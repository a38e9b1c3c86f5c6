from itertools import product
from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.consts import WINDOW_EPSILON

STUDY_WINDOWS = [0.5, 1.0, 1.5, 2.0, 3.0]


class ParamGrid(BaseModel):
    """Detector parameter grid. Defaults reproduce the 5x5x5 tuning sweep."""
    smooth_windows: list[int] = Field(default_factory=lambda: [1, 3, 5, 10, 15], description="N values, frames")
    engage_windows: list[float] = Field(default_factory=lambda: list(STUDY_WINDOWS), description="W_e values, seconds")
    disengage_windows: list[float] = Field(default_factory=lambda: list(STUDY_WINDOWS), description="W_d values, seconds")

    model_config = ConfigDict(frozen=True)

    @field_validator("smooth_windows", "engage_windows", "disengage_windows")
    @classmethod
    def _non_empty_positive(cls, values: list) -> list:
        if not values:
            raise ValueError("grid axis must not be empty")
        if any(v <= 0 for v in values):
            raise ValueError("grid values must be positive")
        return sorted(set(values))

    @field_validator("engage_windows", "disengage_windows")
    @classmethod
    def _longer_than_guard(cls, values: list[float]) -> list[float]:
        if any(v <= WINDOW_EPSILON for v in values):
            raise ValueError(f"window lengths must exceed {WINDOW_EPSILON:g} s")
        return values

    @property
    def size(self) -> int:
        return len(self.smooth_windows) * len(self.engage_windows) * len(self.disengage_windows)

    def cells(self) -> Iterator[tuple[int, float, float]]:
        return product(self.smooth_windows, self.engage_windows, self.disengage_windows)
