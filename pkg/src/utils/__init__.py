"""Utility modules."""

from src.utils.config import Config, RunConfig
from src.utils.errors import DomainError, LottoError, RegimeError, SolverError, UsageError
from src.utils.logger import resolve_log_level, setup_logger

__all__ = [
    "setup_logger",
    "resolve_log_level",
    "Config",
    "RunConfig",
    "LottoError",
    "DomainError",
    "RegimeError",
    "SolverError",
    "UsageError",
]
