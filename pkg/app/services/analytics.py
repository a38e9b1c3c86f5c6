import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from app.consts import AoiLabel, TransitionCause
from app.core.exceptions import AppError
from app.schemas.analytics import CorpusSummary, DwellStats, HeatmapBounds, HeatmapGrid, SessionReport
from app.schemas.detector import TransitionEvent
from app.schemas.gaze import Point2D, TimedGazePoint
from app.schemas.simulation import ScriptedSession
from app.services.scoring import count_turns, evaluate_detection, timing_accuracy
from app.utils.logging import get_logger

logger = get_logger(__name__)

LABELS = [label.value for label in AoiLabel]
PGM_MAXVAL = 65535


def _dwell_from_counts(counts: pd.Series) -> DwellStats:
    counts = counts.reindex(LABELS, fill_value=0)
    total = int(counts.sum())
    fractions = None
    if total:
        fractions = {AoiLabel(k): float(v) / total for k, v in counts.items()}
    return DwellStats(
        total=total,
        counts={AoiLabel(k): int(v) for k, v in counts.items()},
        fractions=fractions,
    )


def page_boundaries(events: Iterable[TransitionEvent]) -> list[float]:
    return [event.timestamp for event in events if event.cause == TransitionCause.RESET]


def dwell_stats(
    labels: Sequence[TimedGazePoint],
    events: Optional[Sequence[TransitionEvent]] = None,
) -> DwellStats:
    """Share of samples per AOI, with a per-page breakdown when events are given.

    A sample at a reset timestamp belongs to the page that ended there.
    """
    frame = pd.DataFrame(
        {
            "t": [p.timestamp for p in labels],
            "label": pd.Categorical([p.label.value for p in labels], categories=LABELS),
        }
    )
    stats = _dwell_from_counts(frame["label"].value_counts())
    if events is None:
        return stats

    boundaries = page_boundaries(events)
    frame["page"] = np.searchsorted(np.asarray(boundaries, dtype=float), frame["t"].to_numpy(), side="left")
    pages = []
    for page in range(len(boundaries) + 1):
        pages.append(_dwell_from_counts(frame.loc[frame["page"] == page, "label"].value_counts()))
    return stats.model_copy(update={"pages": pages})


def _cells(extent: float, cell_size: float) -> int:
    return max(1, math.ceil(extent / cell_size - 1e-9))


def heatmap(points: Iterable[Optional[Point2D]], bounds: HeatmapBounds, cell_size: float) -> HeatmapGrid:
    """Half-open 2D histogram; cell (row, col) starts at (x_min + col*c, y_min + row*c)."""
    if not cell_size > 0:
        raise AppError("cell_size must be positive", code="invalid_argument", field="cell_size")
    listed = list(points)
    present = [p for p in listed if p is not None]
    xy = np.asarray(present, dtype=float).reshape(-1, 2)
    cols = _cells(bounds.x_max - bounds.x_min, cell_size)
    rows = _cells(bounds.y_max - bounds.y_min, cell_size)

    x, y = xy[:, 0], xy[:, 1]
    inside = (x >= bounds.x_min) & (x < bounds.x_max) & (y >= bounds.y_min) & (y < bounds.y_max)
    col = np.minimum(np.floor((x[inside] - bounds.x_min) / cell_size).astype(np.int64), cols - 1)
    row = np.minimum(np.floor((y[inside] - bounds.y_min) / cell_size).astype(np.int64), rows - 1)
    counts = np.zeros((rows, cols), dtype=np.int64)
    np.add.at(counts, (row, col), 1)

    in_bounds = int(inside.sum())
    grid = HeatmapGrid(
        rows=rows,
        cols=cols,
        cell_size=cell_size,
        bounds=bounds,
        counts=counts.tolist(),
        in_bounds=in_bounds,
        out_of_bounds=len(present) - in_bounds,
        missing=len(listed) - len(present),
    )
    logger.debug(f"Heatmap {rows}x{cols}: {in_bounds} in bounds, {grid.out_of_bounds} outside, {grid.missing} missing")
    return grid


def write_heatmap_csv(grid: HeatmapGrid, path: Path) -> None:
    b = grid.bounds
    header = (
        f"x_min={b.x_min} x_max={b.x_max} y_min={b.y_min} y_max={b.y_max} "
        f"cell_size={grid.cell_size} rows={grid.rows} cols={grid.cols} "
        f"out_of_bounds={grid.out_of_bounds} missing={grid.missing}\n"
        "row 0 is the lowest y band"
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.asarray(grid.counts, dtype=np.int64), fmt="%d", delimiter=",", header=header, comments="# ")


def write_heatmap_pgm(grid: HeatmapGrid, path: Path) -> None:
    """Plain (P2) graymap; the top image row is the highest y band."""
    counts = np.flipud(np.asarray(grid.counts, dtype=np.int64))
    peak = int(counts.max()) if counts.size else 0
    maxval = max(1, min(peak, PGM_MAXVAL))
    if peak > PGM_MAXVAL:
        counts = counts * PGM_MAXVAL // peak
    lines = ["P2", f"{grid.cols} {grid.rows}", str(maxval)]
    lines.extend(" ".join(str(int(v)) for v in row) for row in counts)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def page_durations(events: Iterable[TransitionEvent], session_start: float = 0.0) -> list[float]:
    durations = []
    page_start = session_start
    for boundary in page_boundaries(events):
        durations.append(boundary - page_start)
        page_start = boundary
    return durations


def session_report(
    events: Sequence[TransitionEvent],
    truth: Optional[ScriptedSession] = None,
    *,
    tolerance_window: Optional[float] = None,
    session_start: float = 0.0,
) -> SessionReport:
    turns, gaze_turns = count_turns(events)
    timeout_turns = sum(1 for e in events if e.is_turn and e.cause == TransitionCause.TIMEOUT)
    report = SessionReport(
        turns=turns,
        gaze_turns=gaze_turns,
        timeout_turns=timeout_turns,
        success_rate=gaze_turns / turns if turns else 0.0,
        page_durations=page_durations(events, session_start),
    )
    if truth is None:
        return report
    if tolerance_window is None:
        raise AppError("A tolerance window is required to score against ground truth",
                       code="invalid_argument", field="tolerance_window")
    outcomes = evaluate_detection(truth, events, tolerance_window)
    return report.model_copy(update={"outcomes": outcomes, "timing_accuracy": timing_accuracy(outcomes)})


def corpus_summary(reports: Sequence[SessionReport]) -> CorpusSummary:
    """Mean and median of per-session success over sessions with turns, plus the pooled rate."""
    frame = pd.DataFrame(
        {
            "turns": [r.turns for r in reports],
            "gaze_turns": [r.gaze_turns for r in reports],
            "success": [r.success_rate for r in reports],
        },
        dtype=float,
    )
    scored = frame.loc[frame["turns"] > 0, "success"]
    turns = int(frame["turns"].sum())
    gaze_turns = int(frame["gaze_turns"].sum())
    return CorpusSummary(
        sessions=len(reports),
        turns=turns,
        gaze_turns=gaze_turns,
        mean_success=float(scored.mean()) if len(scored) else None,
        median_success=float(scored.median()) if len(scored) else None,
        pooled_success=gaze_turns / turns if turns else 0.0,
    )
