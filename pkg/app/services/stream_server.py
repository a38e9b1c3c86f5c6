import asyncio
from typing import Optional

from app.core.exceptions import ProtocolError
from app.schemas.config import AppConfig
from app.schemas.records import ErrorRecord
from app.services.protocol import StreamSession
from app.services.sessionio import encode_record
from app.utils.logging import get_logger

logger = get_logger(__name__)

_EOF = None


class StreamServer:
    """Newline-delimited JSON over TCP, one independent pipeline per connection.

    Inbound lines are queued per connection up to `service.queue_depth`; on
    overflow the client gets a `backpressure` error and is disconnected. When
    the client closes its sending side the server answers with a report.
    """

    def __init__(self, config: AppConfig, host: Optional[str] = None, port: Optional[int] = None):
        self.config = config
        self.host = host if host is not None else config.service.host
        self.port = port if port is not None else config.service.port
        self._server: Optional[asyncio.Server] = None
        self.connections = 0

    @property
    def bound_port(self) -> int:
        if self._server is None or not self._server.sockets:
            raise ProtocolError("server is not listening", code="not_listening")
        return self._server.sockets[0].getsockname()[1]

    async def start(self) -> "StreamServer":
        try:
            self._server = await asyncio.start_server(self._handle, self.host, self.port)
        except OSError as e:
            logger.error(f"Cannot bind {self.host}:{self.port}: {e.strerror}")
            raise ProtocolError(f"Cannot bind {self.host}:{self.port}: {e.strerror}", code="bind_failed")
        logger.info(f"Stream service listening on {self.host}:{self.bound_port}")
        return self

    async def serve_forever(self) -> None:
        if self._server is None:
            await self.start()
        async with self._server:
            await self._server.serve_forever()

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            logger.info("Stream service stopped")

    async def __aenter__(self) -> "StreamServer":
        return await self.start()

    async def __aexit__(self, *exc) -> None:
        await self.stop()

    @staticmethod
    def _send(writer: asyncio.StreamWriter, record) -> None:
        writer.write((encode_record(record) + "\n").encode("utf-8"))

    async def _process(self, session: StreamSession, line_no: int, line: str, writer: asyncio.StreamWriter) -> None:
        for record in session.handle_line(line, line_no):
            self._send(writer, record)
        await writer.drain()

    async def _worker(self, session: StreamSession, queue: asyncio.Queue, writer: asyncio.StreamWriter) -> None:
        while True:
            item = await queue.get()
            if item is _EOF:
                self._send(writer, session.report())
                await writer.drain()
                return
            await self._process(session, *item, writer)

    async def _heartbeat(self, session: StreamSession, writer: asyncio.StreamWriter, interval: float) -> None:
        while True:
            await asyncio.sleep(interval)
            try:
                self._send(writer, session.heartbeat())
                await writer.drain()
            except ConnectionError as e:
                logger.debug(f"[{session.peer}] heartbeat stopped: {e!r}")
                return

    async def _handle(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        peername = writer.get_extra_info("peername")
        peer = f"{peername[0]}:{peername[1]}" if peername else "-"
        self.connections += 1
        logger.info(f"[{peer}] connected")

        service = self.config.service
        session = StreamSession(self.config, peer)
        queue: asyncio.Queue = asyncio.Queue(maxsize=service.queue_depth)
        worker = asyncio.create_task(self._worker(session, queue, writer))
        heartbeat = (
            asyncio.create_task(self._heartbeat(session, writer, service.heartbeat_interval))
            if service.heartbeat_interval else None
        )
        closed_early = False
        line_no = 0
        try:
            while True:
                try:
                    raw = await reader.readline()
                except (asyncio.LimitOverrunError, ValueError):
                    self._send(writer, ErrorRecord(code="protocol_error", message="line too long", line=line_no + 1))
                    closed_early = True
                    break
                if not raw:
                    break
                line_no += 1
                try:
                    queue.put_nowait((line_no, raw.decode("utf-8", errors="replace")))
                except asyncio.QueueFull:
                    logger.warning(f"[{peer}] inbound queue full at line {line_no}, closing")
                    self._send(writer, ErrorRecord(
                        code="backpressure",
                        message=f"more than {service.queue_depth} samples waiting; closing connection",
                        line=line_no,
                    ))
                    closed_early = True
                    break
                await asyncio.sleep(0)

            if closed_early:
                worker.cancel()
            else:
                # The report is the last record on the wire.
                if heartbeat is not None:
                    heartbeat.cancel()
                await queue.put(_EOF)
                await worker
        except ConnectionError as e:
            logger.info(f"[{peer}] connection dropped: {e!r}")
            worker.cancel()
        except asyncio.CancelledError:
            worker.cancel()
            raise
        finally:
            if heartbeat is not None:
                heartbeat.cancel()
            try:
                await writer.drain()
                writer.close()
                await writer.wait_closed()
            except ConnectionError:
                pass
            logger.info(f"[{peer}] closed after {session.pipeline.samples} samples, {session.errors} errors")


async def run_server(config: AppConfig, host: Optional[str] = None, port: Optional[int] = None) -> None:
    server = StreamServer(config, host, port)
    await server.start()
    try:
        await server.serve_forever()
    finally:
        await server.stop()
