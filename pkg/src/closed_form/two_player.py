"""Closed-form equilibria of the two-player game.

Players are relabelled so that B1 >= B2. With threshold T the equilibrium
takes one of three shapes:

* B1 <= T/2: player 1 is uniform on [0, 2 B1]; player 2 puts 1 - B2/B1 on
  0 and spreads the rest uniformly on the same interval.
* T/2 < B1 < T: both players are uniform on [0, L'] with L' = 2T - 2B1
  (player 2 again with an atom at 0), leave (L', T) empty and put the
  remaining mass on a shared atom at T.
* B1 >= T: the atoms-only profile of the degenerate regime.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.closed_form.degenerate import solve_degenerate_threshold
from src.models.game import GameSpec
from src.models.profile import EquilibriumProfile, Regime
from src.models.strategy import PiecewiseCdf, uniform
from src.utils.errors import RegimeError, SolverError

logger = logging.getLogger(__name__)

SYSTEM_TOL = 1e-9

Affine = Tuple[float, float]


@dataclass(frozen=True)
class TwoPlayerSolution:
    """Two-player equilibrium in budget order (index 0 is the larger budget).

    Attributes:
        game: The game as given by the caller.
        regime: Regime label.
        L: Top of the continuous part (2 B1, L' or T).
        F1: Strategy of the larger-budget player.
        F2: Strategy of the smaller-budget player.
        f2_zero: F2(0), the weak player's atom at 0.
        f1_at_L: F1(L).
        f2_at_L: F2(L).
        atoms_at_T: Mass each player puts on the threshold.
        affine: (a, b) of each player, when the utility is affine on the support.
    """

    game: GameSpec
    regime: Regime
    L: float
    F1: PiecewiseCdf
    F2: PiecewiseCdf
    f2_zero: float
    f1_at_L: float
    f2_at_L: float
    atoms_at_T: Tuple[float, float]
    affine: Optional[Tuple[Affine, Affine]] = None

    @property
    def constants(self) -> dict:
        return {
            "L": self.L,
            "F2(0)": self.f2_zero,
            "F1(L)": self.f1_at_L,
            "F2(L)": self.f2_at_L,
            "F1 atom at T": self.atoms_at_T[0],
            "F2 atom at T": self.atoms_at_T[1],
        }

    def to_profile(self) -> EquilibriumProfile:
        """Profile with strategies in the caller's player order."""
        strong, weak = self.game.order
        strategies = [None, None]
        strategies[strong], strategies[weak] = self.F1, self.F2

        affine = None
        if self.affine is not None:
            coefs = [None, None]
            coefs[strong], coefs[weak] = self.affine
            affine = tuple(coefs)

        return EquilibriumProfile(
            game=self.game,
            strategies=tuple(strategies),
            regime=self.regime,
            L=self.L,
            affine=affine,
            metadata=self.constants,
        )


def regime_b_residuals(
    B1: float, B2: float, T: float, L: float, f1_zero: float, f2_zero: float, f1_L: float, f2_L: float
) -> np.ndarray:
    """Residuals of the four conditions that pin down the mid-budget regime.

    The first two say each player's utility has the same slope on (0, L')
    as between L' and the tie at T; the last two are the budget equalities.
    """
    gap = T - L
    return np.array(
        [
            (f2_L - f2_zero) / L - ((f2_L + 1.0) / 2.0 - f2_L) / gap,
            (f1_L - f1_zero) / L - ((f1_L + 1.0) / 2.0 - f1_L) / gap,
            (f1_L - f1_zero) * L / 2.0 + (1.0 - f1_L) * T - B1,
            (f2_L - f2_zero) * L / 2.0 + (1.0 - f2_L) * T - B2,
        ]
    )


def _sorted_budgets(game: GameSpec) -> Tuple[float, float]:
    if game.n != 2:
        raise RegimeError(f"Two-player closed form needs n=2, got n={game.n}")
    B1, B2 = game.sorted_budgets
    if B2 > B1:
        raise SolverError(f"Budgets out of order after sorting: {B1} < {B2}")
    return B1, B2


def _low_budget(game: GameSpec, B1: float, B2: float, T: float) -> TwoPlayerSolution:
    cap = game.threshold
    L = 2.0 * B1
    f2_zero = 1.0 - B2 / B1
    F1 = uniform(0.0, L, cap=cap)
    F2 = PiecewiseCdf(
        atoms=((0.0, f2_zero),), segments=((0.0, L, B2 / (2.0 * B1 * B1)),), cap=cap
    )
    return TwoPlayerSolution(
        game=game,
        regime=Regime.TWO_PLAYER_LOW_BUDGET,
        L=L,
        F1=F1,
        F2=F2,
        f2_zero=f2_zero,
        f1_at_L=1.0,
        f2_at_L=1.0,
        atoms_at_T=(0.0, 0.0),
        affine=((B2 / (2.0 * B1 * B1), f2_zero), (1.0 / (2.0 * B1), 0.0)),
    )


def _mid_budget(game: GameSpec, B1: float, B2: float, T: float) -> TwoPlayerSolution:
    L = 2.0 * T - 2.0 * B1
    f2_zero = 1.0 - B2 / B1
    f1_L = T / B1 - 1.0
    f2_L = 1.0 - B2 * (2.0 * B1 - T) / (B1 * B1)
    atom1, atom2 = 1.0 - f1_L, 1.0 - f2_L

    if min(L, f1_L, atom1, atom2) <= 0:
        raise RegimeError(
            f"Budgets {B1}, {B2} with T={T} do not give positive masses in the mid-budget regime"
        )

    residuals = regime_b_residuals(B1, B2, T, L, 0.0, f2_zero, f1_L, f2_L)
    if np.max(np.abs(residuals)) > SYSTEM_TOL:
        raise SolverError(f"Mid-budget constants violate their defining system: {residuals}")

    density1 = 1.0 / (2.0 * B1)
    density2 = (1.0 - f2_zero) / (2.0 * T - L)
    F1 = PiecewiseCdf(atoms=((T, atom1),), segments=((0.0, L, density1),), cap=T)
    F2 = PiecewiseCdf(atoms=((0.0, f2_zero), (T, atom2)), segments=((0.0, L, density2),), cap=T)

    return TwoPlayerSolution(
        game=game,
        regime=Regime.TWO_PLAYER_MID_BUDGET,
        L=L,
        F1=F1,
        F2=F2,
        f2_zero=f2_zero,
        f1_at_L=f1_L,
        f2_at_L=f2_L,
        atoms_at_T=(atom1, atom2),
        affine=((density2, f2_zero), (density1, 0.0)),
    )


def _high_budget(game: GameSpec, B2: float, T: float) -> TwoPlayerSolution:
    profile = solve_degenerate_threshold(game)
    strong, weak = game.order
    F1, F2 = profile.strategies[strong], profile.strategies[weak]
    f2_zero = F2.cdf(0.0)
    return TwoPlayerSolution(
        game=game,
        regime=Regime.TWO_PLAYER_HIGH_BUDGET,
        L=T,
        F1=F1,
        F2=F2,
        f2_zero=f2_zero,
        f1_at_L=1.0,
        f2_at_L=1.0,
        atoms_at_T=(F1.atom_mass(T), F2.atom_mass(T)),
    )


def solve_two_player(game: GameSpec) -> TwoPlayerSolution:
    """Closed-form equilibrium of a two-player game.

    A game without threshold is solved at T = 2^(2n+1) max B, where the low
    budget shape always applies and the strategies carry no cap.

    Raises:
        RegimeError: If n != 2 or the budgets do not fit the selected shape.
    """
    B1, B2 = _sorted_budgets(game)
    T = game.effective_cap

    if B1 <= T / 2.0:
        solution = _low_budget(game, B1, B2, T)
    elif B1 < T:
        solution = _mid_budget(game, B1, B2, T)
    else:
        solution = _high_budget(game, B2, T)

    logger.debug(f"Two-player {solution.regime.value}: {solution.constants}")
    return solution


def solve_two_player_unbounded(game: GameSpec) -> EquilibriumProfile:
    """Equilibrium of the two-player game without a threshold."""
    if game.threshold is not None:
        raise RegimeError(f"Expected a game without threshold, got T={game.threshold}")
    return solve_two_player(game).to_profile()
