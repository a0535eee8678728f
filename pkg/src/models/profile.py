"""Equilibrium profiles and their CSV/JSON codecs."""

import csv
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.game import BidGrid, GameSpec
from src.models.strategy import (
    MASS_TOL,
    DiscreteStrategy,
    PiecewiseCdf,
    Strategy,
    strategy_from_dict,
)
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

AFFINE_TOL = 1e-12

CSV_COLUMNS = ["player_index", "kind", "x_or_lo", "hi_or_empty", "mass_or_density"]


class Regime(str, Enum):
    """How a profile was obtained."""

    TWO_PLAYER_LOW_BUDGET = "TwoPlayerLowBudget"
    TWO_PLAYER_MID_BUDGET = "TwoPlayerMidBudget"
    TWO_PLAYER_HIGH_BUDGET = "TwoPlayerHighBudget"
    DEGENERATE_THRESHOLD = "DegenerateThreshold"
    GRID_SOLVED = "GridSolved"

    @property
    def is_closed_form(self) -> bool:
        return self is not Regime.GRID_SOLVED


@dataclass(frozen=True, eq=False)
class EquilibriumProfile:
    """One strategy per player plus solve metadata.

    Attributes:
        game: The game the profile belongs to.
        strategies: Strategy of every player, in the game's player order.
        regime: Regime label.
        L: Common supremum of the supports (computed when omitted).
        affine: Per-player (a_i, b_i) with u_i = a_i x + b_i on the support,
            when known.
        metadata: Free-form solve details (e.g. regime constants).
    """

    game: GameSpec
    strategies: Tuple[Strategy, ...]
    regime: Regime
    L: Optional[float] = None
    affine: Optional[Tuple[Tuple[float, float], ...]] = None
    metadata: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        strategies = tuple(self.strategies)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "regime", Regime(self.regime))

        if len(strategies) != self.game.n:
            raise DomainError(
                f"Profile has {len(strategies)} strategies for a {self.game.n}-player game"
            )

        caps = {s.cap for s in strategies if s.cap is not None}
        if caps and max(caps) - min(caps) > MASS_TOL * max(1.0, max(caps)):
            raise DomainError(f"Strategies use different bid caps: {sorted(caps)}")
        if self.game.threshold is not None:
            top = max(s.support_top for s in strategies)
            if top > self.game.threshold + MASS_TOL * max(1.0, self.game.threshold):
                raise DomainError(f"Support reaches {top}, beyond the threshold {self.game.threshold}")

        if self.L is None:
            object.__setattr__(self, "L", max(s.support_top for s in strategies))

        if self.affine is not None:
            affine = tuple((float(a), float(b)) for a, b in self.affine)
            if len(affine) != self.game.n:
                raise DomainError("Affine coefficients must be given for every player")
            if any(a <= 0 or b < -AFFINE_TOL for a, b in affine):
                raise DomainError(f"Affine coefficients need a > 0 and b >= 0, got {affine}")
            if sum(b > AFFINE_TOL for _, b in affine) > 1:
                raise DomainError(f"At most one player may have b > 0, got {affine}")
            object.__setattr__(self, "affine", affine)

    @property
    def n(self) -> int:
        return self.game.n

    @property
    def is_grid(self) -> bool:
        return all(isinstance(s, DiscreteStrategy) for s in self.strategies)

    @property
    def grid(self) -> Optional[BidGrid]:
        """Common grid of a grid profile, if any."""
        if not self.is_grid:
            return None
        grids = {s.grid for s in self.strategies}  # type: ignore[union-attr]
        return grids.pop() if len(grids) == 1 else None

    def expected_bids(self) -> List[float]:
        return [s.expectation() for s in self.strategies]

    def opponents(self, i: int) -> List[Strategy]:
        return [s for j, s in enumerate(self.strategies) if j != i]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "game": self.game.to_dict(),
            "regime": self.regime.value,
            "L": self.L,
            "affine": [list(c) for c in self.affine] if self.affine else None,
            "metadata": dict(self.metadata),
            "expected_bids": self.expected_bids(),
            "strategies": [s.to_dict() for s in self.strategies],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EquilibriumProfile":
        """Create EquilibriumProfile from dictionary."""
        affine = data.get("affine")
        return cls(
            game=GameSpec.from_dict(data["game"]),
            strategies=tuple(strategy_from_dict(s) for s in data["strategies"]),
            regime=Regime(data["regime"]),
            L=data.get("L"),
            affine=tuple(tuple(c) for c in affine) if affine else None,
            metadata=data.get("metadata", {}),
        )

    def save_json(self, path: str) -> None:
        """Save profile to JSON file."""
        output_path = Path(path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load_json(cls, path: str) -> "EquilibriumProfile":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def write_strategy_csv(strategies: Sequence[Strategy], path: str) -> None:
    """Write strategies as atom/segment rows.

    Floats are written with ``repr`` so reading the file back reproduces
    every value exactly.
    """
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for i, s in enumerate(strategies):
            for loc, mass in s.atoms:
                writer.writerow([i, "atom", repr(loc), "", repr(mass)])
            for lo, hi, density in s.segments:
                writer.writerow([i, "segment", repr(lo), repr(hi), repr(density)])

    logger.debug(f"Wrote {len(strategies)} strategies to {output_path}")


def read_strategy_csv(
    path: str, cap: Optional[float] = None, grid: Optional[BidGrid] = None
) -> List[Strategy]:
    """Read strategies written by :func:`write_strategy_csv`.

    Args:
        path: CSV file.
        cap: Threshold to attach to piecewise strategies.
        grid: When given, atoms are placed back on this grid and
            DiscreteStrategy objects are returned.
    """
    atoms: Dict[int, List[Tuple[float, float]]] = {}
    segments: Dict[int, List[Tuple[float, float, float]]] = {}

    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise DomainError(f"Strategy CSV is missing columns: {sorted(missing)}")
        for row in reader:
            i = int(row["player_index"])
            if row["kind"] == "atom":
                atoms.setdefault(i, []).append((float(row["x_or_lo"]), float(row["mass_or_density"])))
            elif row["kind"] == "segment":
                segments.setdefault(i, []).append(
                    (float(row["x_or_lo"]), float(row["hi_or_empty"]), float(row["mass_or_density"]))
                )
            else:
                raise DomainError(f"Unknown row kind '{row['kind']}' in {path}")

    players = sorted(set(atoms) | set(segments))
    if players != list(range(len(players))):
        raise DomainError(f"Player indices in {path} must be 0..n-1, got {players}")

    strategies: List[Strategy] = []
    for i in players:
        if grid is not None:
            if segments.get(i):
                raise DomainError(f"Player {i} has continuous segments; cannot place on a grid")
            probs = np.zeros(grid.k + 1)
            for loc, mass in atoms.get(i, []):
                probs[grid.index_of(loc)] += mass
            strategies.append(DiscreteStrategy(grid=grid, probs=probs))
        else:
            strategies.append(
                PiecewiseCdf(
                    atoms=tuple(atoms.get(i, [])), segments=tuple(segments.get(i, [])), cap=cap
                )
            )
    return strategies


def cdf_table(profile: EquilibriumProfile, points: Optional[np.ndarray] = None, num: int = 201):
    """Plot-ready table: bid column followed by every player's cdf."""
    if points is None:
        points = np.linspace(0.0, profile.L, num)
    columns = [np.asarray(points, dtype=float)]
    columns += [np.asarray(s.cdf(points), dtype=float) for s in profile.strategies]
    return np.column_stack(columns)


def write_cdf_table(profile: EquilibriumProfile, path: str, num: int = 201) -> None:
    """Write :func:`cdf_table` as CSV with columns x, F_1..F_n."""
    table = cdf_table(profile, num=num)
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    header = ["x"] + [f"F_{i + 1}" for i in range(profile.n)]

    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in table:
            writer.writerow([repr(float(v)) for v in row])
