"""Barrier-regularized online Newton steps over polytopes."""

from ._core import *  # noqa: F401,F403
from ._core import (
    Barons,
    ConfigError,
    Error,
    PreconditionViolated,
    build_box,
    build_reduced_simplex,
    compute_params,
    log_barrier,
    run,
    run_check,
)

__all__ = [
    "Barons",
    "ConfigError",
    "Error",
    "PreconditionViolated",
    "build_box",
    "build_reduced_simplex",
    "compute_params",
    "log_barrier",
    "run",
    "run_check",
]
