from pathlib import Path

import pytest

from app.configs.loader import default_app_config, load_app_config
from app.schemas.aoi import AoiLayout
from app.schemas.detector import DetectorConfig
from app.schemas.geometry import RigidPose, SceneCalibration

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def front_calibration() -> SceneCalibration:
    """Camera at the screen origin facing the user, eye 1 m in front of it."""
    return SceneCalibration(camera_pose=RigidPose.about_axis("y", 180), eye_origin=(0.0, 0.0, 1000.0))


@pytest.fixture
def packaged_config():
    return default_app_config()


@pytest.fixture
def golden_config():
    return load_app_config(GOLDEN / "session.config.yaml")


@pytest.fixture
def layout() -> AoiLayout:
    return AoiLayout()


@pytest.fixture
def detector_config() -> DetectorConfig:
    return DetectorConfig()
