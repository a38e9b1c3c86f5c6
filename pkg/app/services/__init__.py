from .session import SessionPipeline, run_session
from .simulator import generate_cohort, generate_session
from .optimizer import GridResult, best_config, run_grid

__all__ = [
    "SessionPipeline", "run_session", "generate_session", "generate_cohort",
    "GridResult", "run_grid", "best_config",
]
