import asyncio
import json

import pytest

from app.core.exceptions import ProtocolError
from app.services.protocol import StreamSession
from app.services.stream_server import StreamServer


def with_service(config, **changes):
    return config.model_copy(update={"service": config.service.model_copy(update=changes)})


async def exchange(port: int, lines: list[str]) -> list[dict]:
    """Send all lines, half-close, and collect every record until the server closes."""
    reader, writer = await asyncio.open_connection("127.0.0.1", port)
    writer.write("".join(line + "\n" for line in lines).encode("utf-8"))
    await writer.drain()
    writer.write_eof()
    data = await asyncio.wait_for(reader.read(), timeout=10)
    writer.close()
    await writer.wait_closed()
    return [json.loads(line) for line in data.decode("utf-8").splitlines()]


@pytest.fixture
def sample_lines(golden_dir) -> list[str]:
    return (golden_dir / "session.samples.jsonl").read_text().splitlines()


@pytest.fixture
def transcript(golden_dir) -> list[dict]:
    return [json.loads(line) for line in (golden_dir / "session.stdout.jsonl").read_text().splitlines()]


def test_golden_transcript(golden_config, sample_lines, transcript):
    async def scenario():
        async with StreamServer(golden_config) as server:
            return await exchange(server.bound_port, sample_lines)

    assert asyncio.run(scenario()) == transcript


def test_concurrent_clients_are_independent(golden_config, sample_lines, transcript):
    # The second client only reads: it engages and never turns the page.
    reading_only = sample_lines[:6]

    async def scenario():
        async with StreamServer(golden_config) as server:
            return await asyncio.gather(
                exchange(server.bound_port, sample_lines),
                exchange(server.bound_port, reading_only),
                exchange(server.bound_port, sample_lines),
            )

    first, second, third = asyncio.run(scenario())
    assert first == transcript
    assert third == transcript
    engaged, report = second
    assert engaged == transcript[0]
    assert report["samples"] == 5
    assert report["turns"] == 0
    assert report["final_state"] == "engaged"


def test_malformed_line_does_not_end_the_session(golden_config, sample_lines, transcript):
    lines = [sample_lines[0], "{not json", *sample_lines[1:]]

    async def scenario():
        async with StreamServer(golden_config) as server:
            return await exchange(server.bound_port, lines)

    records = asyncio.run(scenario())
    error, *rest = records
    assert error["type"] == "error"
    assert error["code"] == "parse_error"
    assert error["line"] == 2
    assert rest == transcript


def test_unexpected_inbound_type_is_a_protocol_error(golden_config):
    lines = ['{"type":"report"}']

    async def scenario():
        async with StreamServer(golden_config) as server:
            return await exchange(server.bound_port, lines)

    error, report = asyncio.run(scenario())
    assert error["code"] == "protocol_error"
    assert report["type"] == "report"
    assert report["samples"] == 0


class SlowServer(StreamServer):
    async def _process(self, session, line_no, line, writer):
        await asyncio.sleep(0.5)
        await super()._process(session, line_no, line, writer)


def test_backpressure_closes_the_connection(golden_config, sample_lines):
    config = with_service(golden_config, queue_depth=1)

    async def scenario():
        async with SlowServer(config) as server:
            return await exchange(server.bound_port, sample_lines[1:4])

    records = asyncio.run(scenario())
    assert records[-1]["type"] == "error"
    assert records[-1]["code"] == "backpressure"
    assert records[-1]["line"] == 3
    assert all(r["type"] != "report" for r in records)


def test_heartbeat_reports_state(golden_config):
    config = with_service(golden_config, heartbeat_interval=0.05)

    async def scenario():
        async with StreamServer(config) as server:
            reader, writer = await asyncio.open_connection("127.0.0.1", server.bound_port)
            first = json.loads(await asyncio.wait_for(reader.readline(), timeout=5))
            writer.write_eof()
            rest = await asyncio.wait_for(reader.read(), timeout=5)
            writer.close()
            await writer.wait_closed()
            return first, [json.loads(line) for line in rest.decode("utf-8").splitlines()]

    first, rest = asyncio.run(scenario())
    assert first == {"type": "heartbeat", "state": "idle"}
    assert rest[-1]["type"] == "report"


class DroppedWriter:
    def __init__(self):
        self.written = []

    def write(self, data: bytes) -> None:
        self.written.append(data)

    async def drain(self) -> None:
        raise ConnectionResetError("peer went away")


def test_heartbeat_stops_quietly_when_the_peer_drops(golden_config):
    server = StreamServer(golden_config)
    writer = DroppedWriter()
    session = StreamSession(golden_config, "peer")
    asyncio.run(asyncio.wait_for(server._heartbeat(session, writer, 0.01), timeout=5))
    assert len(writer.written) == 1


def test_bind_failure(golden_config):
    async def scenario():
        async with StreamServer(golden_config) as first:
            second = StreamServer(golden_config, port=first.bound_port)
            with pytest.raises(ProtocolError) as exc:
                await second.start()
            return exc.value

    error = asyncio.run(scenario())
    assert error.code == "bind_failed"


def test_port_is_unknown_before_start(golden_config):
    with pytest.raises(ProtocolError):
        StreamServer(golden_config).bound_port
