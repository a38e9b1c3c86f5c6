"""Grid search over (N, W_e, W_d) scored by timing-aware accuracy."""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from app.consts import DetectionOutcome
from app.core.exceptions import AppError
from app.schemas.aoi import AoiLayout
from app.schemas.detector import DetectorConfig
from app.schemas.geometry import SceneCalibration
from app.schemas.optimizer import ParamGrid
from app.schemas.simulation import Trial
from app.services.scoring import evaluate_detection, timing_accuracy
from app.services.session import run_session
from app.utils.logging import get_logger

logger = get_logger(__name__)

CELL_COLUMNS = ["smooth_window", "engage_window", "disengage_window"]
RESULT_COLUMNS = [
    *CELL_COLUMNS,
    "pages",
    "correct",
    "early",
    "late",
    "missed",
    "accuracy",
    "trial_accuracy",
    "mean_latency",
]


@dataclass(frozen=True)
class GridResult:
    """One row per grid cell, in grid order.

    `accuracy` is per page turn over all trials; `trial_accuracy` is the mean
    of per-trial accuracies. `mean_latency` averages detection minus shift
    over correct and late pages and is NaN when there are none.
    """
    table: pd.DataFrame
    base_config: DetectorConfig
    tolerance: float
    trials: int

    def __len__(self) -> int:
        return len(self.table)

    def ranked(self) -> pd.DataFrame:
        return self.table.sort_values(
            ["accuracy", "mean_latency", "disengage_window", "engage_window", "smooth_window"],
            ascending=[False, True, True, True, True],
            na_position="last",
            kind="mergesort",
        ).reset_index(drop=True)

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.table.to_csv(path, index=False, columns=RESULT_COLUMNS, float_format="%.6f", lineterminator="\n")
        logger.info(f"Wrote {len(self.table)} grid rows to {path}")
        return path


def evaluate_cell(
    cell: tuple[int, float, float],
    trials: Sequence[Trial],
    base_config: DetectorConfig,
    tolerance: float,
    layout: AoiLayout,
    calibration: SceneCalibration,
) -> dict:
    smooth_window, engage_window, disengage_window = cell
    config = base_config.with_cell(smooth_window, engage_window, disengage_window)
    counts = {outcome: 0 for outcome in DetectionOutcome}
    per_trial = []
    latencies = []
    for trial in trials:
        events = run_session(config, layout, calibration, trial.samples)
        outcomes = evaluate_detection(trial.truth, events, tolerance)
        for outcome in outcomes:
            counts[outcome.outcome] += 1
            if not math.isnan(outcome.latency_s):
                latencies.append(outcome.latency_s)
        per_trial.append(timing_accuracy(outcomes))

    pages = sum(counts.values())
    return {
        "smooth_window": smooth_window,
        "engage_window": engage_window,
        "disengage_window": disengage_window,
        "pages": pages,
        "correct": counts[DetectionOutcome.CORRECT],
        "early": counts[DetectionOutcome.EARLY],
        "late": counts[DetectionOutcome.LATE],
        "missed": counts[DetectionOutcome.MISSED],
        "accuracy": counts[DetectionOutcome.CORRECT] / pages if pages else 0.0,
        "trial_accuracy": math.fsum(per_trial) / len(per_trial),
        "mean_latency": math.fsum(latencies) / len(latencies) if latencies else math.nan,
    }


def run_grid(
    grid: ParamGrid,
    trials: Sequence[Trial],
    base_config: DetectorConfig,
    tolerance: float,
    *,
    layout: AoiLayout,
    calibration: SceneCalibration,
    workers: int = 1,
) -> GridResult:
    """Replay every trial for every cell. Thresholds and timeout come from `base_config`."""
    if not trials:
        raise AppError("At least one trial is required for a grid search", code="invalid_argument", field="trials")
    if workers < 1:
        raise AppError("workers must be at least 1", code="invalid_argument", field="workers")

    cells = list(grid.cells())
    job = partial(
        evaluate_cell,
        trials=tuple(trials),
        base_config=base_config,
        tolerance=tolerance,
        layout=layout,
        calibration=calibration,
    )
    logger.info(f"Evaluating {len(cells)} cells over {len(trials)} trials with {workers} worker(s)")
    if workers == 1:
        rows = [job(cell) for cell in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(job, cells, chunksize=max(1, len(cells) // (workers * 4))))

    table = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    result = GridResult(table=table, base_config=base_config, tolerance=tolerance, trials=len(trials))
    best = result.ranked().iloc[0]
    logger.info(
        f"Best cell N={int(best.smooth_window)} W_e={best.engage_window:g} W_d={best.disengage_window:g} "
        f"accuracy={best.accuracy:.3f}"
    )
    return result


def best_config(result: GridResult, base_config: Optional[DetectorConfig] = None) -> DetectorConfig:
    """Highest accuracy; ties go to lower latency, then smaller W_d, W_e and N."""
    if not len(result):
        raise AppError("Grid result is empty", code="invalid_argument", field="result")
    best = result.ranked().iloc[0]
    return (base_config or result.base_config).with_cell(
        int(best.smooth_window), float(best.engage_window), float(best.disengage_window)
    )
