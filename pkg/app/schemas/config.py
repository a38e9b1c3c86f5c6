from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.aoi import AoiLayout
from app.schemas.detector import DetectorConfig
from app.schemas.geometry import SceneCalibration


class ServiceConfig(BaseModel):
    host: str = Field("127.0.0.1", description="Listen address of the line-protocol service")
    port: int = Field(7070, ge=0, le=65535, description="Listen port; 0 picks a free port")
    heartbeat_interval: Optional[float] = Field(1.0, gt=0, description="Seconds between heartbeats; null disables")
    queue_depth: int = Field(1024, ge=1, description="Per-connection inbound queue bound")

    model_config = ConfigDict(frozen=True)


class PathsConfig(BaseModel):
    logs_dir: Path = Field(Path("logs"), description="Where replay and serve write logs")
    exports_dir: Path = Field(Path("exports"), description="Where analysis exports land")

    model_config = ConfigDict(frozen=True)


class AppConfig(BaseModel):
    calibration: SceneCalibration = Field(..., description="Screen, camera and eye geometry")
    layout: AoiLayout = Field(default_factory=AoiLayout)
    detector: DetectorConfig = Field(default_factory=DetectorConfig)
    service: ServiceConfig = Field(default_factory=ServiceConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)
    source: Optional[str] = Field(None, exclude=True, description="File the config was loaded from")

    model_config = ConfigDict(frozen=True)
