"""Line protocol shared by the socket service and the WebSocket endpoint.

Inbound: `header` (optional, checked and ignored) and `sample` records.
Outbound: `event`, `error`, `heartbeat` and `report` records.
"""
from pydantic import BaseModel

from app.consts import LOG_FORMAT_VERSION
from app.core.exceptions import AppError, UnsupportedVersionError
from app.schemas.config import AppConfig
from app.schemas.records import (
    ErrorRecord, EventRecord, HeaderRecord, HeartbeatRecord, ReportRecord, SampleRecord
)
from app.services.session import SessionPipeline
from app.services.sessionio import decode_record
from app.utils.logging import get_logger

logger = get_logger(__name__)


class StreamSession:
    """One connection's pipeline plus message translation."""

    def __init__(self, config: AppConfig, peer: str = "-"):
        self.peer = peer
        self.pipeline = SessionPipeline(config.detector, config.layout, config.calibration)
        self.errors = 0

    def _error(self, exc: AppError, line_no: int) -> ErrorRecord:
        self.errors += 1
        logger.warning(f"[{self.peer}] line {line_no} rejected: {exc.message}")
        return ErrorRecord(code=exc.code, message=exc.message, line=line_no)

    def handle_line(self, line: str, line_no: int) -> list[BaseModel]:
        if not line.strip():
            return []
        try:
            record = decode_record(line, line_no)
            if isinstance(record, SampleRecord):
                events = self.pipeline.process(record.to_sample())
                return [EventRecord.from_event(e) for e in events]
            if isinstance(record, HeaderRecord):
                if record.version != LOG_FORMAT_VERSION:
                    raise UnsupportedVersionError(record.version, line=line_no)
                return []
            raise AppError(f"line {line_no}: unexpected inbound message type {record.type!r}",
                           code="protocol_error", field="type")
        except AppError as e:
            return [self._error(e, line_no)]

    def heartbeat(self) -> HeartbeatRecord:
        return HeartbeatRecord(state=self.pipeline.state, t=self.pipeline.last_timestamp)

    def report(self) -> ReportRecord:
        return self.pipeline.report()
