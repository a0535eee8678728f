"""Game and bid-grid data models."""

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from src.utils.errors import DomainError


@dataclass(frozen=True)
class GameSpec:
    """A single-battlefield General Lotto game.

    The battlefield is worth 1 to every player. Bids are capped at
    ``threshold`` when one is given.

    Attributes:
        budgets: Budget B_i > 0 of every player, in the caller's order.
        threshold: Optional common bid cap T > 0.
        order: Player indices sorted by budget, largest first (stable).
    """

    budgets: Tuple[float, ...]
    threshold: Optional[float] = None
    order: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        budgets = tuple(float(b) for b in self.budgets)
        object.__setattr__(self, "budgets", budgets)

        if len(budgets) < 2:
            raise DomainError(f"A game needs at least 2 players, got {len(budgets)}")
        if any(not np.isfinite(b) or b <= 0 for b in budgets):
            raise DomainError(f"Every budget must be a positive real, got {list(budgets)}")
        if self.threshold is not None:
            threshold = float(self.threshold)
            if not np.isfinite(threshold) or threshold <= 0:
                raise DomainError(f"Threshold must be positive, got {self.threshold}")
            object.__setattr__(self, "threshold", threshold)

        order = tuple(sorted(range(len(budgets)), key=lambda i: (-budgets[i], i)))
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        """Number of players."""
        return len(self.budgets)

    @property
    def max_budget(self) -> float:
        return max(self.budgets)

    @property
    def sorted_budgets(self) -> Tuple[float, ...]:
        """Budgets in descending order."""
        return tuple(self.budgets[i] for i in self.order)

    @property
    def bid_bound(self) -> float:
        """Largest bid any equilibrium of the uncapped game uses: 2^(2n+1) * max B."""
        return float(2 ** (2 * self.n + 1)) * self.max_budget

    @property
    def effective_cap(self) -> float:
        """The threshold, or the non-binding bid bound for uncapped games."""
        return self.threshold if self.threshold is not None else self.bid_bound

    @property
    def is_degenerate(self) -> bool:
        """True when some budget reaches the threshold."""
        return self.threshold is not None and self.threshold <= self.max_budget

    def with_threshold(self, threshold: Optional[float]) -> "GameSpec":
        return GameSpec(budgets=self.budgets, threshold=threshold)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"budgets": list(self.budgets), "threshold": self.threshold}

    @classmethod
    def from_dict(cls, data: dict) -> "GameSpec":
        """Create GameSpec from dictionary."""
        if "budgets" not in data:
            raise DomainError("Game config is missing 'budgets'")
        return cls(budgets=tuple(data["budgets"]), threshold=data.get("threshold"))

    @classmethod
    def from_json(cls, text: str) -> "GameSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DomainError(f"Invalid game JSON: {e}") from e
        return cls.from_dict(data)


def load_game_file(path: str) -> Tuple[GameSpec, Optional[int]]:
    """Load a game config file.

    The file is JSON of the form
    ``{"budgets": [1.0, 0.5], "threshold": 3.0, "grid_k": 300}``;
    ``threshold`` and ``grid_k`` may be null or absent.

    Returns:
        The game and the grid resolution stored with it (None if absent).
    """
    text = Path(path).read_text(encoding="utf-8")
    game = GameSpec.from_json(text)
    grid_k = json.loads(text).get("grid_k")
    return game, int(grid_k) if grid_k is not None else None


@dataclass(frozen=True)
class BidGrid:
    """Uniform bid grid {l*T/k : 0 <= l <= k}.

    Attributes:
        k: Resolution (number of intervals).
        T: Cap, the last grid point.
    """

    k: int
    T: float

    def __post_init__(self) -> None:
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"Grid resolution k must be an integer >= 1, got {self.k}")
        if not np.isfinite(self.T) or self.T <= 0:
            raise DomainError(f"Grid cap T must be positive, got {self.T}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "T", float(self.T))

    @cached_property
    def points(self) -> np.ndarray:
        points = np.arange(self.k + 1, dtype=float) * self.T / self.k
        points[-1] = self.T
        points.setflags(write=False)
        return points

    @property
    def spacing(self) -> float:
        return self.T / self.k

    def __len__(self) -> int:
        return self.k + 1

    def index_of(self, x: float) -> int:
        """Index of the grid point closest to ``x`` (ties to the lower point)."""
        l = int(np.ceil(x / self.spacing - 0.5))
        return min(max(l, 0), self.k)

    def contains(self, values: Sequence[float], tol: float = 1e-9) -> bool:
        """True when every value lies on a grid point."""
        return all(abs(self.points[self.index_of(v)] - v) <= tol * max(1.0, self.T) for v in values)

    def midpoints(self) -> np.ndarray:
        return (self.points[:-1] + self.points[1:]) / 2.0

    def to_dict(self) -> dict:
        return {"k": self.k, "T": self.T}

    @classmethod
    def from_dict(cls, data: dict) -> "BidGrid":
        return cls(k=int(data["k"]), T=float(data["T"]))
