from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.consts import WINDOW_EPSILON, EngagementState, TimeoutScope, TransitionCause


class DetectorConfig(BaseModel):
    """Engagement detector parameters. Defaults are the tuned study values."""
    smooth_window: int = Field(3, ge=1, description="Moving-average window N, frames")
    engage_window: float = Field(1.0, gt=WINDOW_EPSILON, description="Engagement window W_e, seconds")
    disengage_window: float = Field(1.0, gt=WINDOW_EPSILON, description="Disengagement window W_d, seconds")
    engage_threshold: float = Field(0.4, gt=0, le=1, description="Tablet fraction tau_e that must be exceeded")
    disengage_threshold: float = Field(0.5, gt=0, le=1, description="Face fraction tau_d that must be exceeded")
    timeout: float = Field(10.0, gt=0, description="Failsafe page timeout, seconds")
    min_window_samples: int = Field(2, ge=1, description="Fewest samples a window needs before it can trigger")
    require_full_window: bool = Field(
        False, description="Only evaluate a window once its full length has elapsed since page start"
    )
    timeout_scope: TimeoutScope = Field(
        TimeoutScope.ENGAGED, description="'engaged': failsafe fires only while Engaged; 'page': also from Idle"
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_timeout(self) -> "DetectorConfig":
        if not self.timeout > self.disengage_window:
            raise ValueError("timeout must exceed disengage_window")
        return self

    def with_cell(self, smooth_window: int, engage_window: float, disengage_window: float) -> "DetectorConfig":
        return DetectorConfig.model_validate(
            {
                **self.model_dump(),
                "smooth_window": smooth_window,
                "engage_window": engage_window,
                "disengage_window": disengage_window,
            }
        )


class TransitionEvent(BaseModel):
    timestamp: float = Field(..., description="Time of the sample that caused the transition, seconds")
    from_state: EngagementState
    to_state: EngagementState
    cause: TransitionCause
    window_fraction: Optional[float] = Field(None, description="Qualifying AOI fraction; only for gaze transitions")
    window_samples: int = Field(0, ge=0, description="Samples in the evidence window")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _fraction_iff_gaze(self) -> "TransitionEvent":
        if (self.cause == TransitionCause.GAZE) != (self.window_fraction is not None):
            raise ValueError("window_fraction is required for gaze transitions and forbidden otherwise")
        return self

    @property
    def is_turn(self) -> bool:
        """A transition into Disengaged, i.e. a page turn."""
        return self.to_state == EngagementState.DISENGAGED

    @property
    def is_gaze_turn(self) -> bool:
        return (
            self.is_turn
            and self.cause == TransitionCause.GAZE
            and self.from_state == EngagementState.ENGAGED
        )
