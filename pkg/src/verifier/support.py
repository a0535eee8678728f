"""Support extraction shared by the verifier checks.

Grid strategies produced by fictitious play carry O(1/t) residue on every
point ever played. Their supports are read above a dust threshold of
min(10/k, 1/2) times the largest mass on a positive bid; the peak itself
always counts. Piecewise strategies are read exactly.
"""

from typing import List, Optional, Tuple

import numpy as np

from src.models.strategy import DiscreteStrategy, Strategy, merge_intervals

EXACT_TOL = 1e-9
DUST_FACTOR = 10.0
DUST_CEILING = 0.5
SUPPORT_SAMPLES = 1000

Interval = Tuple[float, float]


def is_grid(s: Strategy) -> bool:
    return isinstance(s, DiscreteStrategy)


def dust_threshold(s: Strategy) -> float:
    """Mass at or below which a grid point does not count as support."""
    if not isinstance(s, DiscreteStrategy):
        return 0.0
    positive = s.probs[1:]
    peak = float(positive.max()) if positive.size and positive.max() > 0 else float(s.probs[0])
    return min(DUST_FACTOR / s.grid.k, DUST_CEILING) * peak


def resolution(s: Strategy, scale: float = 1.0) -> float:
    """Distance below which two support points are not told apart."""
    if isinstance(s, DiscreteStrategy):
        return s.grid.spacing
    return EXACT_TOL * max(1.0, scale)


def support_pieces(s: Strategy, gap_scale: float = 1.0) -> List[Interval]:
    """Closure of the support as disjoint intervals (atoms as [x, x])."""
    if isinstance(s, DiscreteStrategy):
        return s.support_intervals(gap_tol=2.0 * s.grid.spacing, min_mass=dust_threshold(s))
    return s.support_intervals(gap_tol=EXACT_TOL * max(1.0, gap_scale))


def positive_support(s: Strategy, gap_scale: float = 1.0) -> List[Interval]:
    """Closure of Supp \\ {0} as disjoint intervals."""
    if isinstance(s, DiscreteStrategy):
        pts = s.support_points(dust_threshold(s))
        pts = pts[pts > 0]
        return merge_intervals([(float(p), float(p)) for p in pts], 2.0 * s.grid.spacing)

    pieces = [(x, x) for x, _ in s.atoms if x > 0]
    pieces += [(lo, hi) for lo, hi, _ in s.segments if hi > 0]
    return merge_intervals(pieces, EXACT_TOL * max(1.0, gap_scale))


def lower_endpoint(s: Strategy) -> Optional[float]:
    """Infimum of the positive support (None if the strategy only bids 0)."""
    pieces = positive_support(s)
    return pieces[0][0] if pieces else None


def mass_at_zero(s: Strategy) -> float:
    return float(s.cdf(0.0))


def zero_mass_tolerance(s: Strategy) -> float:
    """Largest F(0) still read as "no atom at 0".

    On a grid, point 0 stands for [0, h/2) and picks up about half a cell of
    any density starting at 0, so the mass of the next point is allowed on
    top of the dust threshold.
    """
    if isinstance(s, DiscreteStrategy):
        return dust_threshold(s) + float(s.probs[1])
    return EXACT_TOL


def has_support_at(s: Strategy, x: float) -> bool:
    """True when ``x`` lies in the support closure."""
    if isinstance(s, DiscreteStrategy):
        l = s.grid.index_of(x)
        return abs(s.points[l] - x) <= 1e-9 * s.grid.spacing and s.probs[l] > dust_threshold(s)
    return any(lo - EXACT_TOL <= x <= hi + EXACT_TOL for lo, hi in support_pieces(s))


def interior_atoms(s: Strategy, lo: float, hi: float) -> List[Tuple[float, float]]:
    """Atoms in the open interval (lo, hi) as (location, mass).

    A grid point counts as an atom when its mass is above the dust
    threshold and at least twice each neighbour's, and it is either
    isolated (both neighbours are dust) or carries three times the median
    mass of the positive support.
    """
    if not isinstance(s, DiscreteStrategy):
        return [(x, m) for x, m in s.atoms if lo < x < hi]

    probs = s.probs
    dust = dust_threshold(s)
    significant = probs[1:][probs[1:] > dust]
    if significant.size == 0:
        return []
    typical = float(np.median(significant))

    padded = np.concatenate(([0.0], probs, [0.0]))
    left, right = padded[:-2], padded[2:]
    spikes = (probs > dust) & (probs >= 2.0 * left) & (probs >= 2.0 * right)
    isolated = (left <= dust) & (right <= dust)
    spikes &= isolated | (probs >= 3.0 * typical)
    return [
        (float(s.points[l]), float(probs[l]))
        for l in np.flatnonzero(spikes)
        if lo < s.points[l] < hi
    ]


def sample_positive_support(s: Strategy, num: int = SUPPORT_SAMPLES) -> np.ndarray:
    """Bids covering Supp \\ {0}: a refinement of every segment plus the atoms."""
    if isinstance(s, DiscreteStrategy):
        pts = s.support_points(dust_threshold(s))
        return pts[pts > 0]

    segments = [(lo, hi) for lo, hi, _ in s.segments if hi > 0]
    total = sum(hi - lo for lo, hi in segments)
    xs = [x for x, _ in s.atoms if x > 0]
    for lo, hi in segments:
        m = max(2, int(round(num * (hi - lo) / total)))
        xs.extend(np.linspace(lo, hi, m + 1)[1:] if lo == 0 else np.linspace(lo, hi, m))
    return np.unique(np.array(xs, dtype=float))
