"""Shared test fixtures for lotto-equilibria tests."""

import json
import tempfile
from pathlib import Path
from typing import Callable, Generator, Optional, Sequence

import pytest

from src.closed_form import solve_closed_form, solve_degenerate_threshold
from src.models import EquilibriumProfile, GameSpec, PiecewiseCdf


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def low_budget_game() -> GameSpec:
    """Two players, B1 <= T/2."""
    return GameSpec(budgets=(1.0, 0.5), threshold=3.0)


@pytest.fixture
def mid_budget_game() -> GameSpec:
    """Two players, T/2 < B1 < T."""
    return GameSpec(budgets=(1.5, 1.0), threshold=2.0)


@pytest.fixture
def degenerate_game() -> GameSpec:
    """Three players, one of them able to afford the threshold."""
    return GameSpec(budgets=(4.0, 1.0, 1.0), threshold=2.0)


@pytest.fixture
def low_budget_profile(low_budget_game: GameSpec) -> EquilibriumProfile:
    return solve_closed_form(low_budget_game)


@pytest.fixture
def mid_budget_profile(mid_budget_game: GameSpec) -> EquilibriumProfile:
    return solve_closed_form(mid_budget_game)


@pytest.fixture
def degenerate_profile(degenerate_game: GameSpec) -> EquilibriumProfile:
    return solve_degenerate_threshold(degenerate_game)


@pytest.fixture
def mixed_strategy() -> PiecewiseCdf:
    """Atom of 0.5 at 0 plus density 0.25 on [0, 2]."""
    return PiecewiseCdf(atoms=((0.0, 0.5),), segments=((0.0, 2.0, 0.25),))


@pytest.fixture
def write_game(temp_dir: Path) -> Callable[..., Path]:
    """Factory writing a game config JSON into the temp directory."""

    def _write(
        budgets: Sequence[float],
        threshold: Optional[float] = None,
        grid_k: Optional[int] = None,
        name: str = "game.json",
    ) -> Path:
        path = temp_dir / name
        data = {"budgets": list(budgets), "threshold": threshold}
        if grid_k is not None:
            data["grid_k"] = grid_k
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


def pytest_configure(config):
    """Configure pytest markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
