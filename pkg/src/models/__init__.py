"""Data models: games, strategies, profiles and reports."""

from src.models.game import BidGrid, GameSpec, load_game_file
from src.models.profile import (
    EquilibriumProfile,
    Regime,
    cdf_table,
    read_strategy_csv,
    write_cdf_table,
    write_strategy_csv,
)
from src.models.reports import (
    BestResponseResult,
    CheckResult,
    DiagnosticsReport,
    SimulationResult,
    SolveReport,
)
from src.models.strategy import (
    DiscreteStrategy,
    PiecewiseCdf,
    Strategy,
    cdf_eval,
    discretize,
    expectation,
    point_mass,
    sample,
    uniform,
)

__all__ = [
    "GameSpec",
    "BidGrid",
    "load_game_file",
    "PiecewiseCdf",
    "DiscreteStrategy",
    "Strategy",
    "point_mass",
    "uniform",
    "cdf_eval",
    "expectation",
    "sample",
    "discretize",
    "EquilibriumProfile",
    "Regime",
    "write_strategy_csv",
    "read_strategy_csv",
    "cdf_table",
    "write_cdf_table",
    "BestResponseResult",
    "SolveReport",
    "CheckResult",
    "DiagnosticsReport",
    "SimulationResult",
]
