from typing import Any, Dict, List, Optional
from starlette import status


class AppError(Exception):
    def __init__(
        self,
        message: str,
        *,
        status_code: int = status.HTTP_400_BAD_REQUEST,
        code: str = "bad_request",
        field: Optional[str] = None,
        errors: Optional[List[dict]] = None,  # [{'code':..., 'message':..., 'field':...}]
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.status_code = status_code
        self.code = code
        self.field = field
        self.errors = errors
        self.details = details


class InvalidAngleError(AppError):
    def __init__(self, message: str, *, field: Optional[str] = None):
        super().__init__(message, code="invalid_angle", field=field,
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY)


class InvalidSampleError(AppError):
    def __init__(self, message: str, *, field: Optional[str] = None):
        super().__init__(message, code="invalid_sample", field=field,
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY)


class GeometryError(AppError):
    def __init__(self, message: str, *, field: Optional[str] = None, code: str = "invalid_geometry"):
        super().__init__(message, code=code, field=field,
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY)


class ProjectionError(GeometryError):
    """Raised when a gaze ray cannot be mapped onto the screen plane."""

    def __init__(self, message: str, *, code: str = "projection_failed"):
        super().__init__(message, code=code)


class NoIntersectionError(ProjectionError):
    def __init__(self, message: str = "Gaze ray is parallel to the screen plane"):
        super().__init__(message, code="no_intersection")


class BehindScreenError(ProjectionError):
    def __init__(self, message: str = "Gaze ray points away from the screen plane"):
        super().__init__(message, code="behind_screen")


class OrderingError(AppError):
    def __init__(self, previous: float, current: float):
        super().__init__(
            f"Timestamp {current!r} does not exceed previous timestamp {previous!r}",
            code="ordering",
            field="t",
            details={"previous": previous, "current": current},
        )
        self.previous = previous
        self.current = current


class DetectorStateError(AppError):
    def __init__(self, message: str):
        super().__init__(message, code="invalid_state", status_code=status.HTTP_409_CONFLICT)


class ConfigError(AppError):
    """Invalid configuration; `line` is set for syntax errors in the source file."""

    def __init__(self, message: str, *, field: Optional[str] = None, line: Optional[int] = None,
                 errors: Optional[List[dict]] = None):
        super().__init__(message, code="invalid_config", field=field, errors=errors,
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                         details={"line": line} if line is not None else None)
        self.line = line


class LogParseError(AppError):
    def __init__(self, message: str, *, line: int, field: Optional[str] = None):
        super().__init__(f"line {line}: {message}", code="parse_error", field=field,
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                         details={"line": line})
        self.line = line


class UnsupportedVersionError(AppError):
    def __init__(self, version: Any, *, line: int = 1):
        super().__init__(f"line {line}: unsupported log format version {version!r}",
                         code="unsupported_version", field="version",
                         status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                         details={"line": line})
        self.version = version
        self.line = line


class ProtocolError(AppError):
    def __init__(self, message: str, *, code: str = "protocol_error", field: Optional[str] = None):
        super().__init__(message, code=code, field=field)
