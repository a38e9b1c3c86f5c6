"""Command line entry point: replay, simulate, optimize, analyze, serve.

Machine-readable output goes to stdout, one JSON object per line; logs and
diagnostics go to stderr.
"""
import asyncio
import json
import math
from pathlib import Path
from typing import Annotated, Any, Optional

import typer
from pydantic import ValidationError

from app.configs.loader import (
    COHORT_PRESET_PATH, GRID_PRESET_PATH, ensure_dir, load_app_config, load_grid, load_preset
)
from app.configs.settings import settings
from app.consts import DEFAULT_TOLERANCE_S
from app.core.exceptions import AppError, ConfigError
from app.schemas.analytics import HeatmapBounds
from app.schemas.config import AppConfig
from app.schemas.detector import DetectorConfig
from app.schemas.records import EventRecord
from app.services.analytics import (
    corpus_summary, dwell_stats, heatmap, session_report, write_heatmap_csv, write_heatmap_pgm
)
from app.services.optimizer import best_config, run_grid
from app.services.session import SessionPipeline
from app.services.sessionio import (
    EVENTS_SUFFIX, SAMPLES_SUFFIX, encode_record, load_trials, read_event_log, read_sample_log, read_truth,
    save_trial, write_event_log,
)
from app.services.simulator import generate_cohort
from app.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)

cli = typer.Typer(
    name="gazeturn",
    help="Gaze-based page-turn detection: replay, simulate, tune, analyze and serve.",
    no_args_is_help=True,
    add_completion=False,
)

ConfigOption = Annotated[
    Optional[Path], typer.Option("--config", "-c", help="Application config YAML (default: $GAZE_CONFIG or packaged)")
]
HEATMAP_MARGIN_MM = 200.0


def _emit(payload: Any) -> None:
    if hasattr(payload, "model_dump"):
        typer.echo(encode_record(payload))
    else:
        typer.echo(json.dumps(payload, separators=(",", ":")))


def _finite(value: float) -> Optional[float]:
    return None if value is None or math.isnan(value) else float(value)


def _override_detector(detector: DetectorConfig, **overrides: Any) -> DetectorConfig:
    changes = {k: v for k, v in overrides.items() if v is not None}
    if not changes:
        return detector
    try:
        return DetectorConfig.model_validate({**detector.model_dump(), **changes})
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(x) for x in err["loc"]) or None
        raise ConfigError(f"invalid detector override: {err['msg']}", field=field)


def _fail(exc: AppError) -> None:
    logger.debug(f"Command failed with {exc.code}: {exc.message}")
    typer.echo(f"error: {exc.message}", err=True)
    raise typer.Exit(code=1)


@cli.callback()
def main_callback(
    log_level: Annotated[str, typer.Option("--log-level", help="Log level for stderr output")] = "WARNING",
) -> None:
    setup_logging(
        level=log_level,
        app_name=settings.APP_NAME,
        enable_json=settings.APP_ENV == "prod",
    )


@cli.command()
def replay(
    input_path: Annotated[Path, typer.Option("--input", "-i", help="Sample log to replay")],
    config: ConfigOption = None,
    events_out: Annotated[Optional[Path], typer.Option("--events-out", help="Write the event log here")] = None,
    save: Annotated[bool, typer.Option("--save", help="Also write the event log under paths.logs_dir")] = False,
    smooth_window: Annotated[Optional[int], typer.Option(help="Override N, frames")] = None,
    engage_window: Annotated[Optional[float], typer.Option(help="Override W_e, seconds")] = None,
    disengage_window: Annotated[Optional[float], typer.Option(help="Override W_d, seconds")] = None,
    engage_threshold: Annotated[Optional[float], typer.Option(help="Override tau_e")] = None,
    disengage_threshold: Annotated[Optional[float], typer.Option(help="Override tau_d")] = None,
    timeout: Annotated[Optional[float], typer.Option(help="Override the failsafe timeout, seconds")] = None,
) -> None:
    """Run a sample log through the pipeline; print events then the session report."""
    try:
        app_config = load_app_config(config)
        detector = _override_detector(
            app_config.detector,
            smooth_window=smooth_window,
            engage_window=engage_window,
            disengage_window=disengage_window,
            engage_threshold=engage_threshold,
            disengage_threshold=disengage_threshold,
            timeout=timeout,
        )
        log = read_sample_log(input_path)
        pipeline = SessionPipeline(detector, app_config.layout, app_config.calibration)
        for sample in log.gaze_samples():
            for event in pipeline.process(sample):
                _emit(EventRecord.from_event(event))
        _emit(pipeline.report())
        targets = [events_out] if events_out is not None else []
        if save:
            name = input_path.name.removesuffix(SAMPLES_SUFFIX).removesuffix(".jsonl")
            targets.append(ensure_dir(app_config.paths.logs_dir) / f"{name}{EVENTS_SUFFIX}")
        for target in targets:
            write_event_log(pipeline.events, target)
            logger.info(f"Wrote {len(pipeline.events)} events to {target}")
    except AppError as e:
        _fail(e)


@cli.command()
def simulate(
    out: Annotated[Path, typer.Option("--out", "-o", help="Directory for sample logs and ground truth")],
    profile: Annotated[Path, typer.Option("--profile", "-p", help="Simulation preset YAML")] = COHORT_PRESET_PATH,
    sessions: Annotated[Optional[int], typer.Option(help="Number of sessions (overrides the preset)")] = None,
    pages: Annotated[Optional[int], typer.Option(help="Pages per session (overrides the preset)")] = None,
    seed: Annotated[Optional[int], typer.Option(help="Base seed; session i uses seed + i")] = None,
    tolerance: Annotated[Optional[float], typer.Option(help="Timing-aware accuracy window, seconds")] = None,
    config: ConfigOption = None,
) -> None:
    """Generate synthetic sessions and print per-session and corpus summaries."""
    try:
        app_config = load_app_config(config)
        preset = load_preset(profile)
        behavior = preset.profile if seed is None else preset.profile.model_copy(update={"seed": seed})
        n_sessions = sessions if sessions is not None else preset.sessions
        n_pages = pages if pages is not None else preset.pages
        if n_sessions < 1 or n_pages < 1:
            raise ConfigError("sessions and pages must be at least 1", field="sessions")
        window = tolerance if tolerance is not None else (preset.tolerance or DEFAULT_TOLERANCE_S)

        ensure_dir(out)
        trials = generate_cohort(
            behavior, n_sessions, n_pages, calibration=app_config.calibration, layout=app_config.layout
        )
        reports = []
        for trial in trials:
            save_trial(trial, out, behavior.sample_rate)
            pipeline = SessionPipeline(app_config.detector, app_config.layout, app_config.calibration)
            for sample in trial.samples:
                pipeline.process(sample)
            report = session_report(pipeline.events, trial.truth, tolerance_window=window)
            reports.append(report)
            _emit({
                "session": trial.name,
                "samples": len(trial.samples),
                "pages": len(trial.truth.pages),
                "turns": report.turns,
                "gaze_turns": report.gaze_turns,
                "success_rate": report.success_rate,
                "timing_accuracy": report.timing_accuracy,
            })
        _emit({"summary": corpus_summary(reports).model_dump(mode="json")})
    except AppError as e:
        _fail(e)


@cli.command()
def optimize(
    out: Annotated[Optional[Path], typer.Option("--out", "-o", help="Grid result CSV (default: paths.exports_dir/grid.csv)")] = None,
    grid: Annotated[Path, typer.Option("--grid", "-g", help="Parameter grid YAML")] = GRID_PRESET_PATH,
    trials: Annotated[Optional[Path], typer.Option("--trials", "-t", help="Directory of recorded or simulated trials")] = None,
    profile: Annotated[Path, typer.Option("--profile", "-p", help="Preset simulated when --trials is absent")] = COHORT_PRESET_PATH,
    tolerance: Annotated[Optional[float], typer.Option(help="Timing-aware accuracy window, seconds")] = None,
    workers: Annotated[int, typer.Option(help="Worker processes")] = 1,
    config: ConfigOption = None,
) -> None:
    """Evaluate every grid cell and print the best configuration."""
    try:
        app_config = load_app_config(config)
        param_grid = load_grid(grid)
        preset = None
        if trials is not None:
            trial_set = load_trials(trials)
        else:
            preset = load_preset(profile)
            trial_set = generate_cohort(
                preset.profile, preset.sessions, preset.pages,
                calibration=app_config.calibration, layout=app_config.layout,
            )
        if tolerance is None:
            tolerance = (preset.tolerance if preset is not None else None) or DEFAULT_TOLERANCE_S

        result = run_grid(
            param_grid, trial_set, app_config.detector, tolerance,
            layout=app_config.layout, calibration=app_config.calibration, workers=workers,
        )
        csv_path = result.to_csv(out if out is not None else app_config.paths.exports_dir / "grid.csv")
        best = best_config(result)
        row = result.ranked().iloc[0]
        _emit({
            "smooth_window": best.smooth_window,
            "engage_window": best.engage_window,
            "disengage_window": best.disengage_window,
            "accuracy": float(row.accuracy),
            "trial_accuracy": float(row.trial_accuracy),
            "mean_latency": _finite(row.mean_latency),
            "cells": len(result),
            "trials": result.trials,
            "csv": str(csv_path),
        })
    except AppError as e:
        _fail(e)


@cli.command()
def analyze(
    events: Annotated[Path, typer.Option("--events", "-e", help="Event log to summarise")],
    samples: Annotated[Optional[Path], typer.Option("--samples", "-s", help="Sample log for dwell and heatmap")] = None,
    truth: Annotated[Optional[Path], typer.Option("--truth", help="Ground truth JSON for timing-aware accuracy")] = None,
    tolerance: Annotated[float, typer.Option(help="Timing-aware accuracy window, seconds")] = DEFAULT_TOLERANCE_S,
    heatmap_out: Annotated[Optional[Path], typer.Option("--heatmap-out", help="Heatmap file (.csv or .pgm)")] = None,
    cell_size: Annotated[float, typer.Option(help="Heatmap cell edge, millimetres")] = 20.0,
    config: ConfigOption = None,
) -> None:
    """Print the session report, plus dwell statistics when samples are given."""
    try:
        app_config = load_app_config(config)
        event_list = read_event_log(events).events()
        report = session_report(
            event_list,
            read_truth(truth) if truth is not None else None,
            tolerance_window=tolerance,
        )
        _emit({"report": report.model_dump(mode="json", exclude_none=True)})

        if samples is None:
            if heatmap_out is not None:
                raise AppError("--heatmap-out needs --samples", code="invalid_argument", field="samples")
            return
        pipeline = SessionPipeline(
            app_config.detector, app_config.layout, app_config.calibration, keep_points=True
        )
        for sample in read_sample_log(samples).gaze_samples():
            pipeline.process(sample)
        _emit({"dwell": dwell_stats(pipeline.points, event_list).model_dump(mode="json")})

        if heatmap_out is not None:
            grid = heatmap([p.point for p in pipeline.points], _heatmap_bounds(app_config), cell_size)
            if heatmap_out.suffix.lower() == ".pgm":
                write_heatmap_pgm(grid, heatmap_out)
            else:
                write_heatmap_csv(grid, heatmap_out)
            _emit({"heatmap": str(heatmap_out), "in_bounds": grid.in_bounds,
                   "out_of_bounds": grid.out_of_bounds, "missing": grid.missing})
    except AppError as e:
        _fail(e)


def _heatmap_bounds(config: AppConfig) -> HeatmapBounds:
    rects = [config.layout.tablet, config.layout.face]
    return HeatmapBounds(
        x_min=min(r.x_min for r in rects) - HEATMAP_MARGIN_MM,
        x_max=max(r.x_max for r in rects) + HEATMAP_MARGIN_MM,
        y_min=min(r.y_min for r in rects) - HEATMAP_MARGIN_MM,
        y_max=max(r.y_max for r in rects) + HEATMAP_MARGIN_MM,
    )


@cli.command()
def serve(
    config: ConfigOption = None,
    host: Annotated[Optional[str], typer.Option(help="Listen address (overrides the config)")] = None,
    port: Annotated[Optional[int], typer.Option(help="Listen port (overrides the config)")] = None,
) -> None:
    """Run the newline-delimited JSON stream service until interrupted."""
    from app.configs.setup import configure_sentry
    from app.services.stream_server import run_server

    setup_logging(
        level="DEBUG" if settings.APP_DEBUG else settings.APP_LOG_LEVEL,
        app_name=settings.APP_NAME,
        enable_json=settings.APP_ENV == "prod",
    )
    try:
        app_config = load_app_config(config)
        configure_sentry(with_fastapi=False)
        asyncio.run(run_server(app_config, host, port))
    except AppError as e:
        _fail(e)
    except KeyboardInterrupt:
        logger.info("Interrupted, shutting down")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
