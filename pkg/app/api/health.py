import time
from importlib.metadata import PackageNotFoundError, version

from fastapi import APIRouter

from app.schemas.response import HealthCheck

router = APIRouter(tags=["Health"])

_STARTED = time.monotonic()

try:
    VERSION = version("gazeturn")
except PackageNotFoundError:
    VERSION = "0.0.0"


@router.get("/health", response_model=HealthCheck, summary="Service health")
async def health() -> HealthCheck:
    return HealthCheck(status="healthy", version=VERSION, uptime=round(time.monotonic() - _STARTED, 3))
