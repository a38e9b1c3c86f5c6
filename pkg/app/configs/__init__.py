from app.configs.settings import settings

__all__ = ["settings"]
