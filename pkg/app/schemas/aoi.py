from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.consts import FixationTarget
from app.schemas.gaze import Point2D


class AoiRect(BaseModel):
    """Axis-aligned rectangle in screen-plane millimetres, half-open on both axes."""
    x_min: float = Field(..., description="Left edge (inclusive), mm")
    x_max: float = Field(..., description="Right edge (exclusive), mm")
    y_min: float = Field(..., description="Bottom edge (inclusive), mm")
    y_max: float = Field(..., description="Top edge (exclusive), mm")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_extent(self) -> "AoiRect":
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be less than x_max")
        if not self.y_min < self.y_max:
            raise ValueError("y_min must be less than y_max")
        return self

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x < self.x_max and self.y_min <= y < self.y_max

    def overlaps(self, other: "AoiRect") -> bool:
        return (
            self.x_min < other.x_max and other.x_min < self.x_max
            and self.y_min < other.y_max and other.y_min < self.y_max
        )

    @property
    def center(self) -> Point2D:
        return Point2D((self.x_min + self.x_max) / 2, (self.y_min + self.y_max) / 2)

    def expanded(self, margin: float) -> "AoiRect":
        return AoiRect(
            x_min=self.x_min - margin,
            x_max=self.x_max + margin,
            y_min=self.y_min - margin,
            y_max=self.y_max + margin,
        )


class AoiLayout(BaseModel):
    tablet: AoiRect = Field(
        default_factory=lambda: AoiRect(x_min=-120, x_max=120, y_min=-450, y_max=-250),
        description="Task display region",
    )
    face: AoiRect = Field(
        default_factory=lambda: AoiRect(x_min=-100, x_max=100, y_min=-100, y_max=100),
        description="Robot face region",
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_disjoint(self) -> "AoiLayout":
        if self.tablet.overlaps(self.face):
            raise ValueError("tablet and face rectangles overlap")
        return self

    def rect(self, target: FixationTarget) -> AoiRect:
        return self.tablet if target == FixationTarget.TABLET else self.face
