"""Budget-constrained best responses on a bid grid."""

import logging
from typing import List

import numpy as np

from src.models.game import BidGrid
from src.models.reports import BestResponseResult
from src.utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

BID_TOL = 1e-12


def upper_concave_envelope(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Indices of the vertices of the upper hull of {(xs[l], ys[l])}.

    ``xs`` must be strictly increasing. Collinear points are dropped, so
    only extreme points remain (monotone chain).
    """
    hull: List[int] = []
    for l in range(len(xs)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (xs[a] - xs[o]) * (ys[l] - ys[o]) - (ys[a] - ys[o]) * (xs[l] - xs[o])
            if cross < 0:
                break
            hull.pop()
        hull.append(l)
    return np.array(hull, dtype=int)


def best_response(u: np.ndarray, budget: float, grid: BidGrid) -> BestResponseResult:
    """Optimal mixed bid against utility curve ``u`` with expected bid <= ``budget``.

    Solves max sum(p_l u_l) s.t. sum(p_l x_l) <= budget exactly: the value is
    the upper concave envelope of the curve, flattened after its maximum,
    evaluated at the budget. Among optimal bids the lowest is chosen.

    Raises:
        DomainError: If the budget is negative or ``u`` does not match the grid.
    """
    u = np.asarray(u, dtype=float)
    if budget < 0:
        raise DomainError(f"Budget must be nonnegative, got {budget}")
    if u.shape != (grid.k + 1,):
        raise DomainError(f"Utility curve has shape {u.shape}, expected ({grid.k + 1},)")
    if not np.all(np.isfinite(u)):
        raise SolverError("Utility curve contains non-finite values")

    xs = grid.points
    hull = upper_concave_envelope(xs, u)
    hull_x, hull_u = xs[hull], u[hull]

    # first maximum; the envelope is flat beyond it
    top = int(np.argmax(hull_u))
    hull, hull_x, hull_u = hull[: top + 1], hull_x[: top + 1], hull_u[: top + 1]
    envelope = float(np.interp(min(budget, xs[-1]), hull_x, hull_u))

    if hull_x[-1] <= budget + BID_TOL:
        return BestResponseResult(
            support=[float(hull_x[-1])],
            weights=[1.0],
            value=float(hull_u[-1]),
            envelope_value_at_budget=envelope,
            support_indices=[int(hull[-1])],
        )

    j = int(np.searchsorted(hull_x, budget, side="right"))
    x_lo, x_hi = hull_x[j - 1], hull_x[j]
    if x_lo == budget:
        return BestResponseResult(
            support=[float(x_lo)],
            weights=[1.0],
            value=float(hull_u[j - 1]),
            envelope_value_at_budget=envelope,
            support_indices=[int(hull[j - 1])],
        )

    w = (budget - x_lo) / (x_hi - x_lo)
    return BestResponseResult(
        support=[float(x_lo), float(x_hi)],
        weights=[1.0 - w, w],
        value=float((1.0 - w) * hull_u[j - 1] + w * hull_u[j]),
        envelope_value_at_budget=envelope,
        support_indices=[int(hull[j - 1]), int(hull[j])],
    )


def response_probs(result: BestResponseResult, grid: BidGrid) -> np.ndarray:
    """Best response as a probability vector over the grid."""
    probs = np.zeros(grid.k + 1)
    probs[result.support_indices] = result.weights
    return probs
