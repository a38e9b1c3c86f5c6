"""Newline-delimited JSON logs for samples, events and ground truth."""
import json
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from pydantic import BaseModel, ValidationError

from app.consts import LOG_FORMAT_VERSION
from app.core.exceptions import AppError, LogParseError, UnsupportedVersionError
from app.schemas.detector import TransitionEvent
from app.schemas.records import (
    EventLog, EventRecord, HeaderRecord, Record, SampleLog, SampleRecord, record_adapter
)
from app.schemas.simulation import ScriptedSession, Trial
from app.utils.logging import get_logger

logger = get_logger(__name__)

SAMPLES_SUFFIX = ".samples.jsonl"
EVENTS_SUFFIX = ".events.jsonl"
TRUTH_SUFFIX = ".truth.json"


def encode_record(record: BaseModel) -> str:
    return json.dumps(record.model_dump(mode="json", exclude_none=True), separators=(",", ":"))


def decode_record(line: str, line_no: int = 1) -> Record:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as e:
        raise LogParseError(f"malformed JSON: {e.msg}", line=line_no)
    if not isinstance(payload, dict):
        raise LogParseError("record must be a JSON object", line=line_no)
    try:
        return record_adapter.validate_python(payload)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(x) for x in err["loc"]) or None
        if err["type"] in ("union_tag_invalid", "union_tag_not_found"):
            raise LogParseError(f"unknown record type {payload.get('type')!r}", line=line_no, field="type")
        raise LogParseError(f"{field}: {err['msg']}" if field else err["msg"], line=line_no, field=field)


def _open_lines(path: Path) -> Iterator[tuple[int, str]]:
    try:
        handle = path.open("r", encoding="utf-8")
    except FileNotFoundError:
        raise AppError(f"File not found: {path}", code="not_found", status_code=404, field="path")
    with handle:
        for line_no, line in enumerate(handle, start=1):
            if line.strip():
                yield line_no, line


def _read_log(path: Path, kind: str, record_type: type) -> tuple[HeaderRecord, list]:
    lines = _open_lines(Path(path))
    first = next(lines, None)
    if first is None:
        raise LogParseError(f"{path} is empty; a header record is required", line=1)
    line_no, text = first
    header = decode_record(text, line_no)
    if not isinstance(header, HeaderRecord):
        raise LogParseError("missing header record", line=line_no, field="type")
    if header.version != LOG_FORMAT_VERSION:
        raise UnsupportedVersionError(header.version, line=line_no)
    if header.kind != kind:
        raise LogParseError(f"expected a {kind} log, found {header.kind}", line=line_no, field="kind")

    records = []
    last_t: Optional[float] = None
    for line_no, text in lines:
        record = decode_record(text, line_no)
        if not isinstance(record, record_type):
            raise LogParseError(f"unexpected {record.type} record in a {kind} log", line=line_no, field="type")
        if kind == "samples":
            if last_t is not None and not record.t > last_t:
                raise LogParseError(f"timestamp {record.t} does not exceed {last_t}", line=line_no, field="t")
            try:
                record.to_sample()
            except AppError as e:
                raise LogParseError(e.message, line=line_no, field=e.field)
            last_t = record.t
        records.append(record)
    logger.debug(f"Read {len(records)} {kind} records from {path}")
    return header, records


def _write_lines(path: Path, records: Iterable[BaseModel]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(encode_record(record) + "\n")


def read_sample_log(path: Path) -> SampleLog:
    header, records = _read_log(path, "samples", SampleRecord)
    return SampleLog(header=header, records=records)


def write_sample_log(log: SampleLog, path: Path) -> None:
    _write_lines(path, [log.header, *log.records])


def read_event_log(path: Path) -> EventLog:
    header, records = _read_log(path, "events", EventRecord)
    return EventLog(header=header, records=records)


def write_event_log(log: Union[EventLog, Sequence[TransitionEvent]], path: Path) -> None:
    if not isinstance(log, EventLog):
        log = EventLog(records=[EventRecord.from_event(e) for e in log])
    _write_lines(path, [log.header, *log.records])


def read_truth(path: Path) -> ScriptedSession:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise AppError(f"File not found: {path}", code="not_found", status_code=404, field="path")
    try:
        return ScriptedSession.model_validate_json(text)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(x) for x in err["loc"]) or None
        raise LogParseError(f"{path}: {err['msg']}", line=1, field=field)


def write_truth(truth: ScriptedSession, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(truth.model_dump_json(indent=2) + "\n", encoding="utf-8")


def save_trial(trial: Trial, directory: Path, sample_rate: Optional[float] = None) -> Path:
    directory = Path(directory)
    log = SampleLog(
        header=HeaderRecord(kind="samples", sample_rate=sample_rate),
        records=[SampleRecord.from_sample(s) for s in trial.samples],
    )
    samples_path = directory / f"{trial.name}{SAMPLES_SUFFIX}"
    write_sample_log(log, samples_path)
    write_truth(trial.truth, directory / f"{trial.name}{TRUTH_SUFFIX}")
    return samples_path


def load_trials(directory: Path) -> list[Trial]:
    """Pairs every `<name>.samples.jsonl` with its `<name>.truth.json`."""
    directory = Path(directory)
    if not directory.is_dir():
        raise AppError(f"Trials directory not found: {directory}", code="not_found", status_code=404, field="trials")
    trials = []
    for samples_path in sorted(directory.glob(f"*{SAMPLES_SUFFIX}")):
        name = samples_path.name[: -len(SAMPLES_SUFFIX)]
        truth_path = directory / f"{name}{TRUTH_SUFFIX}"
        if not truth_path.exists():
            raise AppError(f"Missing ground truth for {samples_path}: {truth_path}", code="not_found",
                           status_code=404, field="trials")
        log = read_sample_log(samples_path)
        trials.append(Trial(name=name, samples=tuple(log.gaze_samples()), truth=read_truth(truth_path)))
    if not trials:
        raise AppError(f"No trials found in {directory}", code="invalid_argument", field="trials")
    logger.info(f"Loaded {len(trials)} trials from {directory}")
    return trials
