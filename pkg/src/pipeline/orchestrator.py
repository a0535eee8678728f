"""Command orchestration: solve, verify, simulate and export."""

import logging
import time
from pathlib import Path
from typing import List, Optional, Tuple

from src.closed_form import classify_regime, solve_closed_form, solve_degenerate_threshold
from src.models import (
    BidGrid,
    DiagnosticsReport,
    EquilibriumProfile,
    GameSpec,
    Regime,
    SimulationResult,
    SolveReport,
    load_game_file,
    read_strategy_csv,
    write_cdf_table,
    write_strategy_csv,
)
from src.simulation import MonteCarloSimulator
from src.solver import FictitiousPlaySolver, exploitability
from src.utility import utility_profile
from src.utils.config import Config, RunConfig
from src.utils.errors import DomainError, RegimeError, UsageError
from src.verifier import EquilibriumVerifier, audit_grid

logger = logging.getLogger(__name__)

STRATEGIES_CSV = "strategies.csv"
CDF_TABLE_CSV = "cdf_table.csv"
PROFILE_JSON = "profile.json"
REPORT_JSON = "report.json"
DIAGNOSTICS_JSON = "diagnostics.json"
SIMULATION_JSON = "simulation.json"


def load_game(path: str) -> Tuple[GameSpec, Optional[int]]:
    """Load a game file, turning I/O problems into usage errors."""
    try:
        return load_game_file(path)
    except FileNotFoundError as e:
        raise UsageError(f"Game file not found: {path}") from e


def load_profile(
    path: str, game: Optional[GameSpec] = None, grid_k: Optional[int] = None
) -> EquilibriumProfile:
    """Load a profile from JSON, or from a strategy CSV plus its game.

    A CSV holding only atoms is placed back on the game's grid when the game
    file names a resolution.
    """
    profile_path = Path(path)
    if not profile_path.exists():
        raise UsageError(f"Profile file not found: {path}")

    if profile_path.suffix.lower() == ".json":
        try:
            return EquilibriumProfile.load_json(path)
        except (KeyError, ValueError) as e:
            raise DomainError(f"Malformed profile JSON {path}: {e}") from e

    if game is None:
        raise UsageError("A strategy CSV needs --game to know budgets and threshold")

    strategies = None
    regime = Regime.GRID_SOLVED
    if grid_k is not None:
        try:
            grid = BidGrid(k=grid_k, T=game.effective_cap)
            strategies = read_strategy_csv(path, grid=grid)
        except DomainError:
            strategies = None
    if strategies is None:
        strategies = read_strategy_csv(path, cap=game.threshold)
        try:
            regime = classify_regime(game)
        except RegimeError:
            pass

    return EquilibriumProfile(game=game, strategies=tuple(strategies), regime=regime)


class LottoPipeline:
    """Runs one CLI command end to end and writes its artifacts.

    Example:
        >>> pipeline = LottoPipeline(Config())
        >>> profile, report = pipeline.run_solve(RunConfig("solve", game_path="game.json"))
    """

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()

    def _output_dir(self, run: RunConfig) -> Path:
        out = Path(run.output)
        out.mkdir(parents=True, exist_ok=True)
        return out

    def _solve_exact(self, game: GameSpec, method: str) -> EquilibriumProfile:
        if method == "degenerate":
            if not game.is_degenerate:
                raise UsageError(
                    f"Method degenerate needs a threshold <= max budget, got T={game.threshold}"
                )
            return solve_degenerate_threshold(game)

        if game.n > 2 and not game.is_degenerate:
            raise UsageError(
                f"Closed form covers n=2 or T <= max budget; use fictitious-play for n={game.n}"
            )
        return solve_closed_form(game)

    def run_solve(self, run: RunConfig) -> Tuple[EquilibriumProfile, SolveReport]:
        """Solve a game and write strategies, cdf table, profile and report."""
        start = time.time()
        logger.info("Stage 1/3: Loading game")
        game, file_k = load_game(run.game_path)
        logger.info(f"Budgets {list(game.budgets)}, threshold {game.threshold}")

        logger.info(f"Stage 2/3: Solving with {run.method}")
        if run.method == "fictitious-play":
            k = run.grid_k or file_k or self.config.grid_k
            grid = BidGrid(k=k, T=game.effective_cap)
            if game.threshold is None:
                logger.info(f"No threshold: solving at the bid bound T={grid.T:g}")
            solver = FictitiousPlaySolver(
                game,
                grid,
                max_iters=run.max_iters,
                target_eps=run.target_eps,
                checkpoint_every=self.config.checkpoint_every,
                show_progress=self.config.show_progress,
            )
            report = solver.run()
            profile = report.profile
        else:
            profile = self._solve_exact(game, run.method)
            grid = audit_grid(profile, game, self.config.k_audit)
            eps = exploitability(profile, game, grid)
            report = SolveReport(
                profile=profile,
                iterations=0,
                exploitability=eps,
                converged=eps <= self.config.closed_form_eps,
                budget_slack=[b - e for b, e in zip(game.budgets, profile.expected_bids())],
                utilities=utility_profile(profile.strategies),
            )

        report.elapsed = time.time() - start
        logger.info("Stage 3/3: Writing artifacts")
        out = self._output_dir(run)
        write_strategy_csv(profile.strategies, str(out / STRATEGIES_CSV))
        write_cdf_table(profile, str(out / CDF_TABLE_CSV))
        profile.save_json(str(out / PROFILE_JSON))
        report.save_json(str(out / REPORT_JSON))
        logger.info(f"Artifacts written to {out}")
        return profile, report

    def run_verify(self, run: RunConfig) -> DiagnosticsReport:
        """Verify a stored profile and write the diagnostics JSON."""
        game, file_k = load_game(run.game_path) if run.game_path else (None, None)
        profile = load_profile(run.profile_path, game, file_k)

        utilities = utility_profile(profile.strategies)
        logger.info(f"Utilities {utilities} (sum {sum(utilities):.12f})")

        verifier = EquilibriumVerifier(
            k_audit=run.k_audit,
            closed_form_eps=self.config.closed_form_eps,
            grid_eps=self.config.grid_eps,
        )
        report = verifier.verify(profile, game)
        report.save_json(str(self._output_dir(run) / DIAGNOSTICS_JSON))
        return report

    def run_simulate(self, run: RunConfig) -> Tuple[SimulationResult, List[float]]:
        """Simulate a stored profile; returns the result and the exact utilities."""
        game, file_k = load_game(run.game_path) if run.game_path else (None, None)
        profile = load_profile(run.profile_path, game, file_k)

        simulator = MonteCarloSimulator(profile, show_progress=self.config.show_progress)
        result = simulator.run(
            samples=run.samples, seed=run.seed, batch_size=self.config.batch_size
        )
        exact = utility_profile(profile.strategies)
        result.save_json(str(self._output_dir(run) / SIMULATION_JSON))
        return result, exact

    def run_export(self, run: RunConfig) -> List[Path]:
        """Convert a profile between JSON and the strategy CSV."""
        game, file_k = load_game(run.game_path) if run.game_path else (None, None)
        profile = load_profile(run.profile_path, game, file_k)
        out = self._output_dir(run)

        if run.export_format == "csv":
            paths = [out / STRATEGIES_CSV, out / CDF_TABLE_CSV]
            write_strategy_csv(profile.strategies, str(paths[0]))
            write_cdf_table(profile, str(paths[1]))
        else:
            paths = [out / PROFILE_JSON]
            profile.save_json(str(paths[0]))

        logger.info(f"Exported {run.profile_path} to {[str(p) for p in paths]}")
        return paths
