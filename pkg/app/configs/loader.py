import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from app.configs.settings import settings
from app.core.exceptions import AppError, ConfigError
from app.schemas.config import AppConfig
from app.schemas.geometry import SceneCalibration
from app.schemas.optimizer import ParamGrid
from app.schemas.simulation import SimulationPreset
from app.utils.logging import get_logger

logger = get_logger(__name__)

CONFIG_DIR = Path(__file__).parent
DEFAULT_CONFIG_PATH = CONFIG_DIR / "defaults.yaml"
COHORT_PRESET_PATH = CONFIG_DIR / "cohort.yaml"
GRID_PRESET_PATH = CONFIG_DIR / "grid.yaml"

M = TypeVar("M", bound=BaseModel)


def _line_of(text: str, key: str) -> Optional[int]:
    needles = (f'"{key}"', f"{key}:")
    for number, line in enumerate(text.splitlines(), start=1):
        if any(n in line for n in needles):
            return number
    return None


def _validate(model: type[M], data: Any, source: Path, text: str = "") -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        errors = [
            {
                "code": err["type"],
                "message": err["msg"],
                "field": ".".join(str(x) for x in err["loc"]) or None,
            }
            for err in e.errors()
        ]
        first = errors[0]
        top = str(e.errors()[0]["loc"][0]) if e.errors()[0]["loc"] else None
        line = _line_of(text, top) if top and text else None
        where = f"{source}:{line}" if line else str(source)
        logger.warning(f"Rejected {model.__name__} from {source}: {first['message']}")
        raise ConfigError(
            f"{where}: {first['field'] or 'value'}: {first['message']}",
            field=first["field"],
            line=line,
            errors=errors,
        ) from e


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}", field="path")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e.strerror}", field="path")


def load_yaml(path: Path) -> tuple[dict, str]:
    text = _read_text(path)
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"{path}:{line or '?'}: invalid YAML: {getattr(e, 'problem', e)}", line=line)
    if data is None:
        return {}, text
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping", line=1)
    return data, text


def load_calibration(path: Path) -> SceneCalibration:
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}: invalid JSON: {e.msg}", line=e.lineno)
    return _validate(SceneCalibration, data, path, text)


def resolve_config_path(path: Optional[Path] = None) -> Path:
    """--config flag, then GAZE_CONFIG, then the packaged defaults."""
    if path is not None:
        return Path(path)
    if settings.GAZE_CONFIG:
        return Path(settings.GAZE_CONFIG)
    return DEFAULT_CONFIG_PATH


def load_app_config(path: Optional[Path] = None) -> AppConfig:
    source = resolve_config_path(path)
    data, text = load_yaml(source)
    calibration = data.get("calibration")
    if calibration is None:
        raise ConfigError(f"{source}: calibration is required", field="calibration", line=None)
    if isinstance(calibration, str):
        data["calibration"] = load_calibration(source.parent / calibration)
    config = _validate(AppConfig, {**data, "source": str(source)}, source, text)
    logger.debug(f"Loaded config from {source}")
    return config


@lru_cache(maxsize=1)
def default_app_config() -> AppConfig:
    return load_app_config(DEFAULT_CONFIG_PATH)


def load_preset(path: Path = COHORT_PRESET_PATH) -> SimulationPreset:
    data, text = load_yaml(Path(path))
    return _validate(SimulationPreset, data, Path(path), text)


def load_grid(path: Path = GRID_PRESET_PATH) -> ParamGrid:
    data, text = load_yaml(Path(path))
    return _validate(ParamGrid, data, Path(path), text)


def ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise AppError(f"Cannot create directory {path}: {e.strerror}", code="io_error", status_code=500)
    return path
