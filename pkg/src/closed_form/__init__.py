"""Closed-form equilibrium constructions."""

from src.closed_form.degenerate import degenerate_strategy, solve_degenerate_threshold
from src.closed_form.regimes import (
    classify_regime,
    condition_below_threshold,
    solve_closed_form,
)
from src.closed_form.two_player import (
    TwoPlayerSolution,
    regime_b_residuals,
    solve_two_player,
    solve_two_player_unbounded,
)

__all__ = [
    "degenerate_strategy",
    "solve_degenerate_threshold",
    "TwoPlayerSolution",
    "solve_two_player",
    "solve_two_player_unbounded",
    "regime_b_residuals",
    "classify_regime",
    "solve_closed_form",
    "condition_below_threshold",
]
