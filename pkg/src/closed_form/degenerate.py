"""Equilibrium of the capped game when some budget reaches the threshold."""

import logging

from src.models.game import GameSpec
from src.models.profile import EquilibriumProfile, Regime
from src.models.strategy import PiecewiseCdf, point_mass
from src.utils.errors import RegimeError

logger = logging.getLogger(__name__)


def degenerate_strategy(budget: float, threshold: float) -> PiecewiseCdf:
    """Bid T with probability min(B/T, 1), otherwise bid 0."""
    if budget >= threshold:
        return point_mass(threshold, cap=threshold)
    share = budget / threshold
    return PiecewiseCdf(atoms=((0.0, 1.0 - share), (threshold, share)), cap=threshold)


def solve_degenerate_threshold(game: GameSpec) -> EquilibriumProfile:
    """Build the atoms-only equilibrium for T <= max B_i.

    Every player who can afford T bids it for sure; everybody else spends
    the whole budget on the chance of a tie at T.

    Raises:
        RegimeError: If the game has no threshold or T > max B_i.
    """
    T = game.threshold
    if T is None or T > game.max_budget:
        raise RegimeError(
            f"Degenerate threshold regime needs T <= max budget, got T={T}, "
            f"budgets={list(game.budgets)}"
        )

    strategies = tuple(degenerate_strategy(b, T) for b in game.budgets)
    logger.debug(f"Degenerate profile at T={T} for budgets {list(game.budgets)}")
    return EquilibriumProfile(
        game=game,
        strategies=strategies,
        regime=Regime.DEGENERATE_THRESHOLD,
        L=T,
    )
