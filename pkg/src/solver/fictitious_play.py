"""Fictitious play on the discretized game."""

import logging
import time
from typing import List, Optional

import numpy as np
from tqdm import tqdm

from src.models.game import BidGrid, GameSpec
from src.models.profile import EquilibriumProfile, Regime
from src.models.reports import SolveReport
from src.models.strategy import DiscreteStrategy
from src.solver.best_response import best_response, response_probs
from src.utility.engine import curves_from_grid_probs
from src.utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)


class FictitiousPlaySolver:
    """Simultaneous fictitious play with uniform averaging.

    Every player starts by bidding 0. In iteration t all players best-respond
    to the same frozen averages, then each average moves toward its best
    response with step 1/(t+2). Exploitability of the current averages is
    measured exactly before every update. The returned profile is the
    checkpointed (or final) average with the lowest exploitability, so its
    certificate never grows from one checkpoint to the next.

    Example:
        >>> solver = FictitiousPlaySolver(GameSpec((1.0, 0.5), 3.0), BidGrid(300, 3.0))
        >>> report = solver.run()
    """

    def __init__(
        self,
        game: GameSpec,
        grid: BidGrid,
        max_iters: int = 20000,
        target_eps: float = 1e-3,
        checkpoint_every: int = 100,
        show_progress: bool = False,
    ):
        if max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {max_iters}")
        if target_eps < 0:
            raise DomainError(f"target_eps must be >= 0, got {target_eps}")
        if game.threshold is None and abs(grid.T - game.bid_bound) > 1e-9 * game.bid_bound:
            raise DomainError(
                f"Games without threshold are solved at T={game.bid_bound}, got grid cap {grid.T}"
            )
        if game.threshold is not None and abs(grid.T - game.threshold) > 1e-9 * game.threshold:
            raise DomainError(f"Grid cap {grid.T} differs from the threshold {game.threshold}")

        self.game = game
        self.grid = grid
        self.max_iters = max_iters
        self.target_eps = target_eps
        self.checkpoint_every = max(1, checkpoint_every)
        self.show_progress = show_progress
        self.budgets = np.array(game.budgets)

        self.averages = np.zeros((game.n, grid.k + 1))
        self.averages[:, 0] = 1.0

    def _step(self) -> tuple:
        """Best responses and per-player gaps against the current averages."""
        curves = curves_from_grid_probs(self.averages)
        if not np.all(np.isfinite(curves)):
            raise SolverError("Non-finite utilities in fictitious play")

        responses = [best_response(curves[i], b, self.grid) for i, b in enumerate(self.budgets)]
        current = np.einsum("ij,ij->i", self.averages, curves)
        gaps = np.array([br.value for br in responses]) - current
        return responses, gaps, current

    def run(self) -> SolveReport:
        """Iterate until the exploitability target or the iteration cap is hit."""
        start = time.time()
        history: List[List[float]] = []
        converged = False
        t = 0
        best_eps = np.inf
        best_t = 0
        best_averages = self.averages.copy()
        best_utilities = np.zeros(self.game.n)

        logger.info(
            f"Fictitious play: n={self.game.n}, k={self.grid.k}, T={self.grid.T}, "
            f"target={self.target_eps}, max_iters={self.max_iters}"
        )

        with tqdm(total=self.max_iters, desc="Fictitious play", disable=not self.show_progress) as bar:
            while True:
                responses, gaps, current = self._step()
                eps = max(float(gaps.max()), 0.0)

                if t % self.checkpoint_every == 0:
                    if eps < best_eps:
                        best_eps, best_t = eps, t
                        best_averages = self.averages.copy()
                        best_utilities = current.copy()
                    history.append([t, eps, best_eps])
                    logger.debug(f"Iteration {t}: exploitability {eps:.6f}")

                if eps <= self.target_eps:
                    converged = True
                    break
                if t >= self.max_iters:
                    break

                step = 1.0 / (t + 2)
                for i, br in enumerate(responses):
                    self.averages[i] += step * (response_probs(br, self.grid) - self.averages[i])
                t += 1
                bar.update(1)

        if eps <= best_eps:
            best_eps, best_t = eps, t
            best_averages, best_utilities = self.averages.copy(), current.copy()
        if history[-1][0] != t:
            history.append([t, eps, best_eps])

        if converged:
            logger.info(f"Converged after {t} iterations (exploitability {eps:.2e})")
        else:
            logger.warning(
                f"Fictitious play stopped at max_iters={self.max_iters} with exploitability "
                f"{eps:.2e} > target {self.target_eps:.2e}"
            )
        if best_t != t:
            logger.info(
                f"Returning the average of iteration {best_t} (exploitability {best_eps:.2e})"
            )

        strategies = tuple(DiscreteStrategy.normalized(self.grid, row) for row in best_averages)
        profile = EquilibriumProfile(
            game=self.game,
            strategies=strategies,
            regime=Regime.GRID_SOLVED,
            metadata={"grid_k": self.grid.k, "grid_T": self.grid.T},
        )
        slack = (self.budgets - np.array(profile.expected_bids())).tolist()
        if self.grid.T > self.game.max_budget:
            loose = [i for i, s in enumerate(slack) if abs(s) > self.grid.spacing]
            if loose:
                logger.warning(
                    f"Budget slack of players {loose} exceeds T/k={self.grid.spacing:.3g}: "
                    f"{np.round(slack, 6).tolist()}"
                )

        return SolveReport(
            profile=profile,
            iterations=t,
            exploitability=float(best_eps),
            converged=converged,
            budget_slack=slack,
            history=history,
            utilities=best_utilities.tolist(),
            elapsed=time.time() - start,
        )


def fictitious_play(
    game: GameSpec,
    grid: Optional[BidGrid] = None,
    max_iters: int = 20000,
    target_eps: float = 1e-3,
    k: int = 300,
    checkpoint_every: int = 100,
    show_progress: bool = False,
) -> SolveReport:
    """Solve ``game`` on ``grid`` (default: k points up to the effective cap)."""
    if grid is None:
        grid = BidGrid(k=k, T=game.effective_cap)
    solver = FictitiousPlaySolver(
        game,
        grid,
        max_iters=max_iters,
        target_eps=target_eps,
        checkpoint_every=checkpoint_every,
        show_progress=show_progress,
    )
    return solver.run()
