"""Exact exploitability of grid profiles."""

import logging
from typing import Sequence

import numpy as np

from src.models.game import BidGrid, GameSpec
from src.models.profile import EquilibriumProfile
from src.models.strategy import DiscreteStrategy, Strategy, discretize
from src.solver.best_response import best_response
from src.utility.engine import curves_from_grid_probs
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)


def grid_probs(strategies: Sequence[Strategy], grid: BidGrid) -> np.ndarray:
    """Stack strategies as an (n, k+1) matrix, discretizing piecewise ones."""
    rows = []
    for s in strategies:
        if isinstance(s, DiscreteStrategy):
            if s.grid != grid:
                raise DomainError(f"Strategy lives on {s.grid}, expected {grid}")
            rows.append(s.probs)
        else:
            rows.append(discretize(s, grid).probs)
    return np.vstack(rows)


def exploitability_gaps(probs: np.ndarray, budgets: Sequence[float], grid: BidGrid) -> np.ndarray:
    """Best-response value minus current utility, per player."""
    curves = curves_from_grid_probs(probs)
    gaps = np.empty(len(budgets))
    for i, budget in enumerate(budgets):
        br = best_response(curves[i], budget, grid)
        gaps[i] = br.value - float(probs[i] @ curves[i])
    return gaps


def exploitability(profile: EquilibriumProfile, game: GameSpec, grid: BidGrid) -> float:
    """max_i [best-response value against F_-i] - u_i(F_i, F_-i) on ``grid``.

    Piecewise strategies are discretized onto the grid first. A negative
    gap (a discretized strategy spending slightly more than its budget) is
    reported as 0.
    """
    probs = grid_probs(profile.strategies, grid)
    gaps = exploitability_gaps(probs, game.budgets, grid)
    logger.debug(f"Exploitability gaps on k={grid.k}: {gaps.tolist()}")
    return max(float(gaps.max()), 0.0)
