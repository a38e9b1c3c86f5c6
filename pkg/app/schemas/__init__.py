from app.schemas.response import ApiResponse, ApiError, ErrorDetail, HealthCheck
from app.schemas.gaze import EulerGaze, GazeSample, Point2D, TimedGazePoint, Vec3
from app.schemas.geometry import RigidPose, SceneCalibration, ScreenPlane
from app.schemas.aoi import AoiLayout, AoiRect
from app.schemas.detector import DetectorConfig, TransitionEvent
from app.schemas.simulation import (
    BehaviorProfile, Fixation, PageOutcome, ScriptedPage, ScriptedSession, SimulationPreset, Trial
)
from app.schemas.optimizer import ParamGrid
from app.schemas.analytics import CorpusSummary, DwellStats, HeatmapBounds, HeatmapGrid, SessionReport
from app.schemas.records import (
    ErrorRecord, EventLog, EventRecord, HeaderRecord, HeartbeatRecord, ReportRecord, SampleLog, SampleRecord
)
from app.schemas.config import AppConfig, PathsConfig, ServiceConfig
from app.schemas.replay import ReplayRequest, ReplayResult

__all__ = [
    "ApiResponse",
    "ApiError",
    "ErrorDetail",
    "HealthCheck",
    "EulerGaze",
    "GazeSample",
    "Point2D",
    "TimedGazePoint",
    "Vec3",
    "RigidPose",
    "SceneCalibration",
    "ScreenPlane",
    "AoiLayout",
    "AoiRect",
    "DetectorConfig",
    "TransitionEvent",
    "BehaviorProfile",
    "Fixation",
    "PageOutcome",
    "ScriptedPage",
    "ScriptedSession",
    "SimulationPreset",
    "Trial",
    "ParamGrid",
    "CorpusSummary",
    "DwellStats",
    "HeatmapBounds",
    "HeatmapGrid",
    "SessionReport",
    "ErrorRecord",
    "EventLog",
    "EventRecord",
    "HeaderRecord",
    "HeartbeatRecord",
    "ReportRecord",
    "SampleLog",
    "SampleRecord",
    "AppConfig",
    "PathsConfig",
    "ServiceConfig",
    "ReplayRequest",
    "ReplayResult",
]
