from typing import Literal
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    APP_NAME: str = "gazeturn"
    APP_ENV: Literal["dev", "prod"] = "dev"
    APP_DEBUG: bool = False
    APP_LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(env_file=".env", env_prefix="APP_")


class GazeSettings(BaseSettings):
    GAZE_CONFIG: str | None = None

    model_config = SettingsConfigDict(env_file=".env", env_prefix="GAZE_")


class SentrySettings(BaseSettings):
    SENTRY_DSN: str | None = None
    SENTRY_TRACES_SAMPLE_RATE: float = 0.2
    SENTRY_PROFILES_SAMPLE_RATE: float = 0.0
    SENTRY_SEND_DEFAULT_PII: bool = False

    model_config = SettingsConfigDict(env_file=".env", env_prefix="SENTRY_")


class Settings(AppSettings, GazeSettings, SentrySettings):
    RELEASE: str | None = None
    model_config = SettingsConfigDict(env_file=".env", env_prefix="", extra="ignore")


settings = Settings()
