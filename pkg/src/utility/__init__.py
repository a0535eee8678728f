"""Winning-probability and expected-utility engine."""

from src.utility.engine import (
    OpponentSummary,
    curves_from_grid_probs,
    expected_utility,
    summarize_opponents,
    tie_share,
    utility_curve,
    utility_profile,
    win_prob,
    win_probs,
)

__all__ = [
    "OpponentSummary",
    "summarize_opponents",
    "tie_share",
    "win_prob",
    "win_probs",
    "curves_from_grid_probs",
    "expected_utility",
    "utility_profile",
    "utility_curve",
]
