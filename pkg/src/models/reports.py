"""Result data models: best responses, solve, diagnostics and simulation reports."""

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from src.models.profile import EquilibriumProfile


def _save(data: dict, path: str) -> None:
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    with open(output_path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)


@dataclass
class BestResponseResult:
    """Optimal budget-feasible mixed bid against a utility curve.

    Attributes:
        support: At most two grid points.
        weights: Probability of each support point.
        value: Achieved expected utility.
        envelope_value_at_budget: Upper concave envelope of the curve at
            min(budget, top grid point).
        support_indices: Grid indices of the support points.
    """

    support: List[float]
    weights: List[float]
    value: float
    envelope_value_at_budget: float
    support_indices: List[int] = field(default_factory=list)

    @property
    def expected_bid(self) -> float:
        return float(np.dot(self.support, self.weights))

    @property
    def is_pure(self) -> bool:
        return len(self.support) == 1

    def to_dict(self) -> dict:
        return {
            "support": self.support,
            "weights": self.weights,
            "value": self.value,
            "envelope_value_at_budget": self.envelope_value_at_budget,
        }


@dataclass
class SolveReport:
    """Outcome of a grid solve.

    Attributes:
        profile: Averaged strategy profile (regime GridSolved).
        iterations: Iterations run.
        exploitability: Max over players of best-response value minus
            current utility, measured exactly on the grid.
        converged: Whether ``exploitability <= target_eps`` was reached.
        budget_slack: B_i minus expected bid, per player.
        history: (iteration, exploitability, best exploitability so far)
            checkpoints; the last one is the returned profile's.
        utilities: Expected utility of every player.
        elapsed: Wall time in seconds.
    """

    profile: EquilibriumProfile
    iterations: int
    exploitability: float
    converged: bool
    budget_slack: List[float]
    history: List[List[float]] = field(default_factory=list)
    utilities: List[float] = field(default_factory=list)
    elapsed: float = 0.0
    solved_at: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "regime": self.profile.regime.value,
            "iterations": self.iterations,
            "exploitability": self.exploitability,
            "converged": self.converged,
            "expected_bids": self.profile.expected_bids(),
            "budget_slack": self.budget_slack,
            "utilities": self.utilities,
            "L": self.profile.L,
            "history": self.history,
            "elapsed": round(self.elapsed, 3),
            "solved_at": self.solved_at.isoformat(),
        }

    def save_json(self, path: str) -> None:
        """Save report to JSON file."""
        _save(self.to_dict(), path)


@dataclass
class CheckResult:
    """Outcome of one verifier check.

    Attributes:
        name: Check name, after the property it tests.
        passed: Pass/fail.
        residual: Measured violation (0 when nothing is violated).
        tolerance: Largest residual that still passes.
        details: Human-readable explanation.
        applicable: False when the check's preconditions do not hold; such
            checks count as passed.
        data: Measured quantities (fitted coefficients, endpoints, ...).
        basis: Equilibrium property the check instantiates.
    """

    name: str
    passed: bool
    residual: float
    tolerance: float
    details: str = ""
    applicable: bool = True
    data: Dict[str, Any] = field(default_factory=dict)
    basis: str = ""

    @classmethod
    def not_applicable(cls, name: str, reason: str) -> "CheckResult":
        return cls(name=name, passed=True, residual=0.0, tolerance=0.0, details=reason, applicable=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "details": self.details,
            "applicable": self.applicable,
            "basis": self.basis,
            "data": _jsonable(self.data),
        }


@dataclass
class DiagnosticsReport:
    """All verifier checks for one profile."""

    checks: List[CheckResult]
    created_at: datetime = field(default_factory=datetime.now)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Optional[CheckResult]:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "created_at": self.created_at.isoformat(),
            "checks": [c.to_dict() for c in self.checks],
        }

    def save_json(self, path: str) -> None:
        _save(self.to_dict(), path)


@dataclass
class SimulationResult:
    """Monte Carlo estimate of win shares and mean bids.

    Attributes:
        win_share: Empirical share of the battlefield won by each player.
        win_share_se: Standard error of each share.
        mean_bid: Empirical mean bid of each player.
        mean_bid_se: Standard error of each mean bid.
        tie_rate: Fraction of rounds decided by a tie break.
        samples: Number of rounds.
        seed: Root seed.
    """

    win_share: List[float]
    win_share_se: List[float]
    mean_bid: List[float]
    mean_bid_se: List[float]
    tie_rate: float
    samples: int
    seed: int

    @property
    def share_sum(self) -> float:
        return float(sum(self.win_share))

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "win_share": self.win_share,
            "win_share_se": self.win_share_se,
            "mean_bid": self.mean_bid,
            "mean_bid_se": self.mean_bid_se,
            "tie_rate": self.tie_rate,
            "share_sum": self.share_sum,
        }

    def save_json(self, path: str) -> None:
        _save(self.to_dict(), path)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value
