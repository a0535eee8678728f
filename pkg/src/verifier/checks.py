"""Equilibrium property checks.

Each check returns a CheckResult named after the property it tests. A check
whose preconditions do not hold for the profile is returned as passed with
``applicable=False``.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.closed_form.regimes import condition_below_threshold
from src.models.game import BidGrid, GameSpec
from src.models.profile import EquilibriumProfile
from src.models.reports import CheckResult
from src.models.strategy import MASS_TOL, DiscreteStrategy, Strategy, merge_intervals
from src.solver.exploitability import exploitability
from src.utility.engine import win_probs
from src.utils.errors import DomainError
from src.verifier.support import (
    EXACT_TOL,
    has_support_at,
    interior_atoms,
    lower_endpoint,
    mass_at_zero,
    positive_support,
    resolution,
    sample_positive_support,
    support_pieces,
    zero_mass_tolerance,
)

logger = logging.getLogger(__name__)

AFFINE_FIT_TOL = 1e-6
DOMINATION_TOL = 1e-6
INTERCEPT_FLOOR = -1e-9
POSITIVE_INTERCEPT = 1e-6
CLOSED_FORM_EPS = 1e-3
GRID_EPS = 1e-2
MIN_AUDIT_K = 1000
DOMAIN_SAMPLES = 1001

CHECK_BASIS: Dict[str, str] = {
    "budget_feasibility": "feasible strategies spend at most their budget in expectation",
    "affine_utility_on_support": (
        "equilibrium utility is affine on each positive support, with at most one "
        "positive intercept"
    ),
    "no_shared_interior_atoms": "below the threshold, no bid is an atom of two players",
    "support_structure": (
        "supports close to [0, L]; each positive support is an interval ending at L "
        "that meets every [0, eps], and utility is positive on (0, L]"
    ),
    "budget_ordering": "support lower ends and atoms at 0 are ordered by budget",
    "bid_bound": "without a threshold no equilibrium bid exceeds 2^(2n+1) max B",
    "threshold_structure": (
        "players who afford T bid T; otherwise T lies in no support or in at least two"
    ),
    "epsilon_nash": "no player gains more than eps by deviating",
}


def _x_tolerance(profile: EquilibriumProfile) -> float:
    """Largest resolution among the strategies of a profile."""
    return max(resolution(s, profile.L) for s in profile.strategies) * (1.0 + 1e-9)


def _domain_points(profile: EquilibriumProfile) -> np.ndarray:
    """Bids on which utilities are compared with their affine bounds."""
    top = max(s.support_top for s in profile.strategies)
    grid = profile.grid
    if grid is not None:
        return grid.points[grid.points <= top + grid.spacing / 2.0]

    xs = [np.linspace(0.0, top, DOMAIN_SAMPLES)]
    for s in profile.strategies:
        bps = s.breakpoints
        xs.append(bps[bps <= top])
    return np.unique(np.concatenate(xs))


def _single_point_affine(
    x0: float, u0: float, xs: np.ndarray, us: np.ndarray
) -> Tuple[float, float]:
    """Flattest line through (x0, u0) that dominates the curve left of x0."""
    left = xs < x0 - EXACT_TOL
    if not np.any(left):
        return u0 / x0, 0.0
    a = float(np.min((u0 - us[left]) / (x0 - xs[left])))
    return a, u0 - a * x0


def check_affine_on_support(
    profile: EquilibriumProfile, grid_tolerance: float = GRID_EPS
) -> CheckResult:
    """u_i(x) = a_i x + b_i on Supp_i \\ {0}, u_i <= a_i x + b_i elsewhere.

    Also requires a_i > 0, b_i >= 0 and at most one player with b_i > 0.
    Grid profiles are held to ``grid_tolerance`` instead of the exact
    fit tolerance.
    """
    name = "affine_utility_on_support"
    grid_mode = profile.is_grid
    fit_tol = grid_tolerance if grid_mode else AFFINE_FIT_TOL * profile.n
    dom_tol = grid_tolerance if grid_mode else DOMINATION_TOL
    floor = -grid_tolerance if grid_mode else INTERCEPT_FLOOR
    positive_b = grid_tolerance if grid_mode else POSITIVE_INTERCEPT

    domain = _domain_points(profile)
    coefs: List[Tuple[float, float]] = []
    fit_residuals: List[float] = []
    worst = 0.0
    problems: List[str] = []

    for i, s in enumerate(profile.strategies):
        xs = sample_positive_support(s)
        if xs.size == 0:
            problems.append(f"player {i} has no positive support")
            coefs.append((float("nan"), float("nan")))
            fit_residuals.append(float("inf"))
            worst = float("inf")
            continue

        opponents = profile.opponents(i)
        us = win_probs(xs, opponents)
        u_domain = win_probs(domain, opponents)

        if xs.size >= 2:
            a, b = (float(c) for c in np.polyfit(xs, us, 1))
            fit = float(np.max(np.abs(us - (a * xs + b))))
        else:
            a, b = _single_point_affine(float(xs[0]), float(us[0]), domain, u_domain)
            fit = 0.0
        dominated = float(np.max(u_domain - (a * domain + b), initial=0.0))

        coefs.append((a, b))
        fit_residuals.append(fit)
        worst = max(worst, fit, dominated)

        if fit > fit_tol:
            problems.append(f"player {i}: utility is not affine on its support (residual {fit:.2e})")
        if a <= 0:
            problems.append(f"player {i}: slope a={a:.3e} is not positive")
        if b < floor:
            problems.append(f"player {i}: intercept b={b:.3e} is negative")
        if dominated > dom_tol:
            problems.append(
                f"player {i}: utility exceeds its support line by {dominated:.2e} off the support"
            )

    positive = [i for i, (_, b) in enumerate(coefs) if b > positive_b]
    if len(positive) > 1:
        problems.append(f"players {positive} all have b > 0")

    return CheckResult(
        name=name,
        passed=not problems,
        residual=worst,
        tolerance=fit_tol,
        details="; ".join(problems) if problems else "utilities are affine on every support",
        data={
            "a": [c[0] for c in coefs],
            "b": [c[1] for c in coefs],
            "fit_residual": fit_residuals,
        },
    )


def check_atoms(profile: EquilibriumProfile) -> CheckResult:
    """No bid in (0, T) is an atom of two or more players."""
    name = "no_shared_interior_atoms"
    T = profile.game.threshold
    hi = T if T is not None else np.inf

    atoms: Dict[float, List[Tuple[int, float]]] = {}
    for i, s in enumerate(profile.strategies):
        for x, m in interior_atoms(s, 0.0, hi):
            atoms.setdefault(x, []).append((i, m))

    shared = {x: entries for x, entries in atoms.items() if len(entries) >= 2}
    residual = 0.0
    for entries in shared.values():
        masses = sorted((m for _, m in entries), reverse=True)
        residual = max(residual, masses[1])

    if shared:
        where = ", ".join(
            f"x={x:.6g} (players {[i for i, _ in e]})" for x, e in sorted(shared.items())
        )
        details = f"shared interior atoms at {where}"
    else:
        details = f"{len(atoms)} interior atom location(s), none shared"

    return CheckResult(
        name=name,
        passed=not shared,
        residual=residual,
        tolerance=0.0,
        details=details,
        data={"shared": sorted(shared)},
    )


def check_support_structure(profile: EquilibriumProfile) -> CheckResult:
    """Supports form [0, L]; every positive support is one interval ending at L.

    Also every support meets [0, max(L/100, h)] and every player's utility
    is positive on (0, L].
    """
    name = "support_structure"
    T = profile.game.threshold
    pieces = [support_pieces(s, profile.L) for s in profile.strategies]
    empty = [i for i, p in enumerate(pieces) if not p]
    if empty:
        return CheckResult(
            name=name,
            passed=False,
            residual=1.0,
            tolerance=0.0,
            details=f"players {empty} have no support above the dust threshold",
            data={"empty": empty},
        )
    if T is not None:
        for s, p in zip(profile.strategies, pieces):
            if p[-1][1] >= T - resolution(s, T) / 2.0:
                return CheckResult.not_applicable(name, "support reaches the threshold")

    tol = _x_tolerance(profile)
    L = max(p[-1][1] for p in pieces)
    gap = 2.0 * tol if profile.is_grid else tol
    union = merge_intervals([iv for p in pieces for iv in p], gap)

    problems: List[str] = []
    residual = 0.0

    if len(union) != 1 or union[0][0] > tol:
        problems.append(f"union of supports is {union}, not an interval [0, L]")
        residual = max(residual, union[0][0], float(len(union) - 1))

    eps = max(L / 100.0, tol)
    tops = []
    for i, s in enumerate(profile.strategies):
        pos = positive_support(s, profile.L)
        if not pos:
            problems.append(f"player {i} only bids 0")
            continue
        if len(pos) > 1:
            problems.append(f"player {i}: positive support has {len(pos)} components {pos}")
        top = pos[-1][1]
        tops.append(top)
        if abs(top - L) > tol:
            problems.append(f"player {i}: support ends at {top:.6g}, not at L={L:.6g}")
            residual = max(residual, abs(top - L))
        if pieces[i][0][0] > eps:
            problems.append(f"player {i}: no support in [0, {eps:.3g}]")
            residual = max(residual, pieces[i][0][0])

    grid = profile.grid
    if grid is not None:
        xs = grid.points[(grid.points > 0) & (grid.points <= L + tol)]
    else:
        xs = np.linspace(0.0, L, DOMAIN_SAMPLES)[1:]
    for i in range(profile.n):
        u = win_probs(xs, profile.opponents(i))
        if xs.size and np.min(u) <= 0:
            where = float(xs[np.argmin(u)])
            problems.append(f"player {i}: utility is 0 at x={where:.6g}")

    return CheckResult(
        name=name,
        passed=not problems,
        residual=residual,
        tolerance=tol,
        details="; ".join(problems) if problems else f"supports form [0, {L:.6g}]",
        data={"L": L, "tops": tops, "union": union},
    )


def check_budget_ordering(profile: EquilibriumProfile, game: GameSpec) -> CheckResult:
    """Support lower ends and atoms at 0 are ordered by budget.

    Players with the largest budget have no atom at 0 and support starting
    at 0. Below them, lower support ends are nondecreasing and F(0) is
    nondecreasing as budgets decrease; a strictly poorer player has an atom
    at 0 (checked for exact profiles, where it is resolvable).
    """
    name = "budget_ordering"
    if game.is_degenerate:
        return CheckResult.not_applicable(name, "some budget reaches the threshold")

    strategies = profile.strategies
    order = game.order
    budgets = game.budgets
    top_budget = game.max_budget
    tol = _x_tolerance(profile)

    betas = [lower_endpoint(s) for s in strategies]
    zeros = [mass_at_zero(s) for s in strategies]
    problems: List[str] = []
    residual = 0.0

    for i in order:
        if betas[i] is None:
            problems.append(f"player {i} only bids 0")
            continue
        if budgets[i] == top_budget:
            if zeros[i] > zero_mass_tolerance(strategies[i]):
                problems.append(f"player {i} has the largest budget but F(0)={zeros[i]:.4g}")
                residual = max(residual, zeros[i])
            if betas[i] > tol:
                problems.append(f"player {i} has the largest budget but support starts at {betas[i]:.4g}")
                residual = max(residual, betas[i])
        elif not profile.is_grid and zeros[i] <= EXACT_TOL:
            problems.append(f"player {i} has budget {budgets[i]} < {top_budget} but no atom at 0")

    chain = [i for i in order if budgets[i] < top_budget and betas[i] is not None]
    for prev, nxt in zip(chain, chain[1:]):
        if budgets[nxt] == budgets[prev]:
            continue
        if betas[nxt] < betas[prev] - tol:
            problems.append(
                f"support of player {nxt} starts at {betas[nxt]:.4g}, below player {prev}'s "
                f"{betas[prev]:.4g}"
            )
            residual = max(residual, betas[prev] - betas[nxt])

    for prev, nxt in zip(order, order[1:]):
        if budgets[nxt] == budgets[prev]:
            continue
        slack = zero_mass_tolerance(strategies[prev])
        if zeros[nxt] < zeros[prev] - slack:
            problems.append(
                f"F(0) of player {nxt} ({zeros[nxt]:.4g}) is below that of richer player {prev} "
                f"({zeros[prev]:.4g})"
            )
            residual = max(residual, zeros[prev] - zeros[nxt])

    return CheckResult(
        name=name,
        passed=not problems,
        residual=residual,
        tolerance=tol,
        details="; ".join(problems) if problems else "support ends and F(0) follow the budgets",
        data={"beta": betas, "F0": zeros},
    )


def check_bid_bound(profile: EquilibriumProfile, game: GameSpec) -> CheckResult:
    """No bid above 2^(2n+1) max B in a game without binding threshold."""
    name = "bid_bound"
    bound = game.bid_bound
    if game.threshold is not None and game.threshold <= bound:
        return CheckResult.not_applicable(name, f"threshold {game.threshold} <= bound {bound}")

    top = max(s.support_top for s in profile.strategies)
    excess = max(top - bound, 0.0)
    passed = top <= bound * (1.0 + MASS_TOL)
    return CheckResult(
        name=name,
        passed=passed,
        residual=excess,
        tolerance=0.0,
        details=f"largest support point {top:.6g}, bound {bound:.6g}",
        data={"max_support_point": top, "bound": bound},
    )


def audit_grid(profile: EquilibriumProfile, game: GameSpec, k_audit: int) -> BidGrid:
    """Grid on which a profile's exploitability is measured."""
    grid = profile.grid
    if grid is not None:
        return grid
    if k_audit < MIN_AUDIT_K:
        raise DomainError(f"Audit grid needs k >= {MIN_AUDIT_K}, got {k_audit}")
    cap = game.threshold if game.threshold is not None else profile.L * (1.0 + 1.0 / k_audit)
    return BidGrid(k=k_audit, T=cap)


def check_epsilon_nash(
    profile: EquilibriumProfile,
    game: GameSpec,
    k_audit: int = 10000,
    tolerance: Optional[float] = None,
) -> CheckResult:
    """Exploitability on an audit grid stays within the declared tolerance.

    Grid profiles are audited on their own grid; others are discretized on
    a k_audit grid up to the threshold (or just past L).
    """
    name = "epsilon_nash"
    if tolerance is None:
        tolerance = GRID_EPS if profile.is_grid else CLOSED_FORM_EPS

    grid = audit_grid(profile, game, k_audit)
    eps = exploitability(profile, game, grid)
    return CheckResult(
        name=name,
        passed=eps <= tolerance,
        residual=eps,
        tolerance=tolerance,
        details=(
            f"exploitability {eps:.3e} on a k={grid.k} audit grid (spacing {grid.spacing:.3e})"
        ),
        data={"exploitability": eps, "k": grid.k, "spacing": grid.spacing},
    )


def _mass_on(s: Strategy, x: float) -> float:
    if isinstance(s, DiscreteStrategy):
        return float(s.probs[s.grid.index_of(x)])
    return s.atom_mass(x)


def check_threshold_structure(profile: EquilibriumProfile, game: GameSpec) -> CheckResult:
    """Shape of equilibria in a game with threshold T.

    If some B_i >= T, those players bid T for sure and everybody else bids 0
    or T. Otherwise the number of players with T in their support closure
    is not 1, the supports below T are intervals ending at a common L'
    (two of them starting at 0), and some player has no atom at 0.
    """
    name = "threshold_structure"
    T = game.threshold
    if T is None:
        return CheckResult.not_applicable(name, "game has no threshold")

    problems: List[str] = []
    residual = 0.0
    strategies = profile.strategies
    mass_tol = GRID_EPS if profile.is_grid else EXACT_TOL
    data: Dict[str, object] = {}

    rich = [i for i, b in enumerate(game.budgets) if b >= T]
    if rich:
        for i, s in enumerate(strategies):
            on_T = _mass_on(s, T)
            if i in rich:
                miss = 1.0 - on_T
                if miss > mass_tol:
                    problems.append(f"player {i} can afford T but bids it with probability {on_T:.4g}")
            else:
                miss = 1.0 - on_T - _mass_on(s, 0.0)
                if miss > mass_tol:
                    problems.append(f"player {i} puts {miss:.4g} outside {{0, T}}")
            residual = max(residual, miss)
        data["rich_players"] = rich
    else:
        at_T = [i for i, s in enumerate(strategies) if has_support_at(s, T)]
        data["players_at_T"] = at_T
        if len(at_T) == 1:
            problems.append(f"only player {at_T[0]} has T in its support")

        tol = _x_tolerance(profile)
        tops, starts = [], []
        for i, s in enumerate(strategies):
            if float(s.cdf_left(T)) <= MASS_TOL:
                continue
            below, _ = condition_below_threshold(s, T)
            pos = positive_support(below, T)
            if not pos:
                continue
            if len(pos) > 1:
                problems.append(f"player {i}: support below T has {len(pos)} components")
            starts.append(pos[0][0])
            tops.append(pos[-1][1])

        if tops and max(tops) - min(tops) > tol:
            problems.append(f"supports below T end at {tops}, not at a common L'")
            residual = max(residual, max(tops) - min(tops))
        if sum(c <= tol for c in starts) < 2:
            problems.append(f"fewer than two supports start at 0 (starts {starts})")
        if not any(mass_at_zero(s) <= zero_mass_tolerance(s) for s in strategies):
            problems.append("every player has an atom at 0")
        data.update({"L_prime": max(tops) if tops else None, "starts": starts})

    return CheckResult(
        name=name,
        passed=not problems,
        residual=residual,
        tolerance=mass_tol,
        details="; ".join(problems) if problems else "threshold structure holds",
        data=data,
    )


def check_budget_feasibility(profile: EquilibriumProfile, game: GameSpec) -> CheckResult:
    """Every expected bid stays within its budget."""
    name = "budget_feasibility"
    bids = np.array(profile.expected_bids())
    budgets = np.array(game.budgets)
    overspend = float(np.max(bids - budgets))
    tol = 1e-9
    grid = profile.grid
    if grid is not None:
        tol += grid.spacing

    return CheckResult(
        name=name,
        passed=overspend <= tol,
        residual=max(overspend, 0.0),
        tolerance=tol,
        details=f"expected bids {np.round(bids, 9).tolist()} vs budgets {budgets.tolist()}",
        data={"expected_bids": bids.tolist(), "slack": (budgets - bids).tolist()},
    )
