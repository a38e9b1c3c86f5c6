from app.utils.logging import get_logger, setup_logging, log_with_context
from app.utils.api_response import ok

__all__ = [
    "get_logger",
    "setup_logging",
    "log_with_context",
    "ok",
]
