from fastapi import APIRouter, Depends, WebSocket, WebSocketDisconnect, status

from app.dependencies import get_app_config, get_ws_app_config
from app.schemas.config import AppConfig
from app.schemas.records import EventRecord
from app.schemas.replay import ReplayRequest, ReplayResult
from app.schemas.response import ApiError, ApiResponse
from app.services.protocol import StreamSession
from app.services.session import SessionPipeline
from app.services.sessionio import encode_record
from app.utils import get_logger, log_with_context
from app.utils.api_response import ok

logger = get_logger(__name__)

router = APIRouter(
    tags=["Sessions"],
    responses={
        400: {"model": ApiError, "description": "Bad Request"},
        422: {"model": ApiError, "description": "Validation Error"},
        500: {"model": ApiError, "description": "Internal Server Error"}
    }
)


@router.post(
    "/replay",
    response_model=ApiResponse[ReplayResult],
    status_code=status.HTTP_200_OK,
    summary="Replay a recorded session",
    description="Run sample records through the detection pipeline and return the transition events and report",
)
async def replay_session(
    request: ReplayRequest,
    config: AppConfig = Depends(get_app_config),
):
    pipeline = SessionPipeline(request.detector or config.detector, config.layout, config.calibration)
    events = []
    for record in request.samples:
        events.extend(pipeline.process(record.to_sample()))
    result = ReplayResult(
        events=[EventRecord.from_event(e) for e in events],
        report=pipeline.report(),
    )
    log_with_context(logger, "info", "Replayed session", samples=pipeline.samples, turns=result.report.turns)
    return ok(data=result.model_dump(mode="json", exclude_none=True),
              message=f"Replayed {pipeline.samples} samples")


@router.websocket("/stream")
async def stream_session(
    websocket: WebSocket,
    config: AppConfig = Depends(get_ws_app_config),
):
    """Line protocol over WebSocket: one record per text frame."""
    await websocket.accept()
    client = websocket.client
    session = StreamSession(config, peer=f"{client.host}:{client.port}" if client else "ws")
    line_no = 0
    try:
        while True:
            text = await websocket.receive_text()
            line_no += 1
            for record in session.handle_line(text, line_no):
                await websocket.send_text(encode_record(record))
    except WebSocketDisconnect:
        logger.info(f"[{session.peer}] websocket closed after {session.pipeline.samples} samples")
