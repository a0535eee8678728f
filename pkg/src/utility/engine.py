"""Winning probabilities and expected utilities under uniform tie-breaking."""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from src.models.game import BidGrid
from src.models.strategy import MASS_TOL, DiscreteStrategy, Strategy
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

CAP_TOL = 1e-12


@dataclass(frozen=True)
class OpponentSummary:
    """How one opponent's bid compares with a query bid.

    Attributes:
        p_below: P(X < x).
        p_equal: P(X = x).
        p_above: P(X > x).
    """

    p_below: float
    p_equal: float
    p_above: float

    def __post_init__(self) -> None:
        total = self.p_below + self.p_equal + self.p_above
        if abs(total - 1.0) > MASS_TOL:
            raise DomainError(f"Opponent probabilities must sum to 1, got {total!r}")


def summarize_opponents(x: float, opponents: Sequence[Strategy]) -> List[OpponentSummary]:
    """Per-opponent (below, equal, above) probabilities at bid ``x``."""
    if x < 0:
        raise DomainError(f"Bids are nonnegative, got x={x}")
    summaries = []
    for opp in opponents:
        right, left = opp.cdf(x), opp.cdf_left(x)
        summaries.append(OpponentSummary(p_below=left, p_equal=right - left, p_above=1.0 - right))
    return summaries


def tie_share(below: np.ndarray, equal: np.ndarray) -> np.ndarray:
    """Expected share 1/(1+#ties) of winning, given nobody bids strictly above.

    ``below`` and ``equal`` have shape (n_opponents, n_bids). The tie-count
    distribution is the product of the polynomials (below_j + equal_j z);
    the coefficient of z^m is the probability that exactly m opponents tie
    and the rest bid strictly below.
    """
    n_opp, n_bids = below.shape
    coef = np.zeros((n_bids, n_opp + 1))
    coef[:, 0] = 1.0
    for j in range(n_opp):
        shifted = coef[:, :-1] * equal[j][:, None]
        coef = coef * below[j][:, None]
        coef[:, 1:] += shifted
    shares = 1.0 / np.arange(1, n_opp + 2)
    return coef @ shares


def win_probs(xs, opponents: Sequence[Strategy]) -> np.ndarray:
    """Vectorized winning probability at each bid of ``xs``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs < 0):
        raise DomainError(f"Bids are nonnegative, got {xs[xs < 0][:3].tolist()}")
    if not opponents:
        raise DomainError("At least one opponent is required")

    below = np.empty((len(opponents), len(xs)))
    equal = np.empty_like(below)
    for j, opp in enumerate(opponents):
        right = np.asarray(opp.cdf(xs), dtype=float)
        left = np.asarray(opp.cdf_left(xs), dtype=float)
        below[j] = left
        equal[j] = np.maximum(right - left, 0.0)
    return tie_share(below, equal)


def win_prob(x: float, opponents: Sequence[Strategy]) -> float:
    """Probability of winning the battlefield with bid ``x``.

    Ties are split uniformly: E[1{x >= all opponents} / (1 + #ties)].
    Against atomless opponents this is the product of their cdfs at x.
    """
    if x < 0:
        raise DomainError(f"Bids are nonnegative, got x={x}")
    return float(win_probs([x], opponents)[0])


def curves_from_grid_probs(probs: np.ndarray) -> np.ndarray:
    """Utility curves of every player when all play on one grid.

    Args:
        probs: Array of shape (n_players, k+1), one distribution per row.

    Returns:
        Array of shape (n_players, k+1); row i is u_i at every grid point.
    """
    n = probs.shape[0]
    curves = np.empty_like(probs)
    for i in range(n):
        curves[i] = _grid_win_probs(np.delete(probs, i, axis=0))
    return curves


def _grid_win_probs(opponent_probs: np.ndarray) -> np.ndarray:
    """Winning probability at every grid point against grid opponents (one row each)."""
    below = np.clip(np.cumsum(opponent_probs, axis=1) - opponent_probs, 0.0, 1.0)
    return tie_share(below, opponent_probs)


def _check_caps(strategies: Sequence[Strategy]) -> None:
    caps = {s.cap for s in strategies if s.cap is not None}
    if caps and max(caps) - min(caps) > CAP_TOL * max(1.0, max(caps)):
        raise DomainError(f"Strategies are defined on different thresholds: {sorted(caps)}")


def _segment_integral(
    lo: float, hi: float, density: float, opponents: Sequence[Strategy]
) -> float:
    """Integral of density * prod_j F_j(x) over [lo, hi], exactly.

    Opponent cdfs are linear between their breakpoints, so after refining
    [lo, hi] at every opponent breakpoint the integrand is a polynomial of
    degree <= n-1 on each piece.
    """
    cuts = [lo, hi]
    for opp in opponents:
        bps = opp.breakpoints
        cuts.extend(bps[(bps > lo) & (bps < hi)].tolist())
    edges = np.unique(np.array(cuts, dtype=float))
    a, b = edges[:-1], edges[1:]
    width = b - a

    # coefficients in t = x - a, one row per piece
    coef = np.ones((len(a), 1))
    for opp in opponents:
        start = np.asarray(opp.cdf(a), dtype=float)
        slope = (np.asarray(opp.cdf_left(b), dtype=float) - start) / width
        grown = np.zeros((len(a), coef.shape[1] + 1))
        grown[:, :-1] += coef * start[:, None]
        grown[:, 1:] += coef * slope[:, None]
        coef = grown

    powers = np.arange(1, coef.shape[1] + 1)
    antiderivative = (coef / powers) * width[:, None] ** powers
    return density * float(antiderivative.sum())


def expected_utility(me: Strategy, opponents: Sequence[Strategy]) -> float:
    """Overall winning probability of ``me`` against independent opponents."""
    _check_caps([me, *opponents])
    if not opponents:
        raise DomainError("At least one opponent is required")

    if isinstance(me, DiscreteStrategy):
        return float(me.probs @ win_probs(me.points, opponents))

    total = 0.0
    if me.atoms:
        locs = np.array([loc for loc, _ in me.atoms])
        masses = np.array([m for _, m in me.atoms])
        total += float(masses @ win_probs(locs, opponents))
    for lo, hi, density in me.segments:
        total += _segment_integral(lo, hi, density, opponents)
    return total


def utility_profile(strategies: Sequence[Strategy]) -> List[float]:
    """Every player's expected utility; the values sum to 1."""
    return [
        expected_utility(s, [o for j, o in enumerate(strategies) if j != i])
        for i, s in enumerate(strategies)
    ]


def utility_curve(grid: BidGrid, opponents: Sequence[Strategy]) -> np.ndarray:
    """Winning probability at every grid point (length k+1)."""
    if opponents and all(isinstance(o, DiscreteStrategy) and o.grid == grid for o in opponents):
        return _grid_win_probs(np.vstack([o.probs for o in opponents]))
    return win_probs(grid.points, opponents)

