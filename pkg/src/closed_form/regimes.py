"""Regime selection and dispatch for closed-form equilibria."""

import logging
from typing import Tuple

import numpy as np

from src.closed_form.degenerate import solve_degenerate_threshold
from src.closed_form.two_player import solve_two_player
from src.models.game import GameSpec
from src.models.profile import EquilibriumProfile, Regime
from src.models.strategy import MASS_TOL, DiscreteStrategy, PiecewiseCdf, Strategy
from src.utils.errors import DomainError, RegimeError

logger = logging.getLogger(__name__)


def classify_regime(game: GameSpec) -> Regime:
    """Regime whose closed form solves ``game``.

    Raises:
        RegimeError: For n >= 3 unless some budget reaches the threshold.
    """
    T = game.threshold
    if game.n == 2:
        B1 = game.max_budget
        if T is None or B1 <= T / 2.0:
            return Regime.TWO_PLAYER_LOW_BUDGET
        if B1 < T:
            return Regime.TWO_PLAYER_MID_BUDGET
        return Regime.TWO_PLAYER_HIGH_BUDGET

    if T is not None and T <= game.max_budget:
        return Regime.DEGENERATE_THRESHOLD
    raise RegimeError(
        f"No closed form for n={game.n} with threshold {T} above every budget; "
        f"use the grid solver"
    )


def solve_closed_form(game: GameSpec) -> EquilibriumProfile:
    """Closed-form equilibrium in the caller's player order."""
    regime = classify_regime(game)
    logger.info(f"Closed-form regime: {regime.value}")

    if regime is Regime.DEGENERATE_THRESHOLD:
        return solve_degenerate_threshold(game)
    return solve_two_player(game).to_profile()


def condition_below_threshold(strategy: Strategy, cap: float) -> Tuple[Strategy, float]:
    """Drop the mass on ``cap`` and renormalize the rest: F'(x) = F(x) / F(cap^-).

    Returns:
        The conditioned strategy (uncapped for piecewise input) and its
        expected bid.

    Raises:
        DomainError: If the strategy puts all its mass on ``cap``.
    """
    below = float(strategy.cdf_left(cap))
    if below <= MASS_TOL:
        raise DomainError(f"Strategy has no mass below {cap}")

    if isinstance(strategy, DiscreteStrategy):
        probs = np.array(strategy.probs)
        probs[strategy.points >= cap - strategy.grid.spacing / 2.0] = 0.0
        conditioned: Strategy = DiscreteStrategy.normalized(strategy.grid, probs)
    else:
        atoms = tuple((x, m / below) for x, m in strategy.atoms if x < cap)
        segments = tuple(
            (lo, min(hi, cap), d / below) for lo, hi, d in strategy.segments if lo < cap
        )
        conditioned = PiecewiseCdf(atoms=atoms, segments=segments)

    return conditioned, conditioned.expectation()
