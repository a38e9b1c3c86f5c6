from fastapi import Request, WebSocket

from app.configs.loader import load_app_config
from app.schemas.config import AppConfig


def _config_of(app) -> AppConfig:
    config = getattr(app.state, "config", None)
    if config is None:
        config = load_app_config()
        app.state.config = config
    return config


def get_app_config(request: Request) -> AppConfig:
    return _config_of(request.app)


def get_ws_app_config(websocket: WebSocket) -> AppConfig:
    return _config_of(websocket.app)


__all__ = ["get_app_config", "get_ws_app_config"]
