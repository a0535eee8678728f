"""Mixed-strategy representations: piecewise cdfs and grid distributions.

Both classes expose the same read interface (``atoms``, ``segments``,
``cdf``, ``cdf_left``, ``expectation``, ``quantile``, ``sample``) so the
utility engine, the verifier and the simulator can treat them alike.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.models.game import BidGrid
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

MASS_TOL = 1e-12
BUDGET_TOL = 1e-9

Atom = Tuple[float, float]
Segment = Tuple[float, float, float]


def _as_array(x) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _check_nonnegative(x: np.ndarray) -> None:
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError(f"Bids must be nonnegative, got {x[(x < 0) | np.isnan(x)][:3].tolist()}")


@dataclass(frozen=True, eq=False)
class PiecewiseCdf:
    """Point atoms plus a piecewise-linear continuous part on [0, cap].

    Attributes:
        atoms: (location, mass) pairs, mass in (0, 1].
        segments: (lo, hi, density) triples on disjoint increasing intervals.
        cap: Bid threshold of the game the strategy belongs to, if any.

    Example:
        >>> s = PiecewiseCdf(atoms=((0.0, 0.5),), segments=((0.0, 2.0, 0.25),))
        >>> s.evaluate(0.0)
        (0.5, 0.0)
    """

    atoms: Tuple[Atom, ...] = ()
    segments: Tuple[Segment, ...] = ()
    cap: Optional[float] = None
    _knots_x: np.ndarray = field(init=False, repr=False)
    _knots_f: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        atoms = self._normalize_atoms(self.atoms)
        segments = tuple(
            (float(lo), float(hi), float(d)) for lo, hi, d in self.segments if float(d) > 0.0
        )
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "segments", segments)
        if self.cap is not None:
            object.__setattr__(self, "cap", float(self.cap))

        self._validate()
        knots_x, knots_f = self._build_knots()
        object.__setattr__(self, "_knots_x", knots_x)
        object.__setattr__(self, "_knots_f", knots_f)

    @staticmethod
    def _normalize_atoms(atoms: Iterable[Atom]) -> Tuple[Atom, ...]:
        merged: dict = {}
        for loc, mass in atoms:
            loc, mass = float(loc), float(mass)
            if mass == 0.0:
                continue
            merged[loc] = merged.get(loc, 0.0) + mass
        return tuple(sorted(merged.items()))

    def _validate(self) -> None:
        for loc, mass in self.atoms:
            if loc < 0 or not np.isfinite(loc):
                raise DomainError(f"Atom location must be nonnegative, got {loc}")
            if not 0.0 < mass <= 1.0 + MASS_TOL:
                raise DomainError(f"Atom mass must lie in (0, 1], got {mass}")

        previous_hi = -np.inf
        for lo, hi, density in self.segments:
            if lo < 0 or not hi > lo or not np.isfinite(hi):
                raise DomainError(f"Segment must satisfy 0 <= lo < hi, got ({lo}, {hi})")
            if density < 0 or not np.isfinite(density):
                raise DomainError(f"Segment density must be nonnegative, got {density}")
            if lo < previous_hi:
                raise DomainError("Segments must be disjoint and increasing")
            previous_hi = hi

        if not self.atoms and not self.segments:
            raise DomainError("A strategy needs at least one atom or segment")

        total = self.total_mass
        if abs(total - 1.0) > MASS_TOL:
            raise DomainError(f"Total mass must be 1, got {total!r}")

        if self.cap is not None and self.support_top > self.cap + MASS_TOL:
            raise DomainError(
                f"Support reaches {self.support_top}, beyond the threshold {self.cap}"
            )

    def _build_knots(self) -> Tuple[np.ndarray, np.ndarray]:
        """Knot list of the cdf; a jump is two knots at the same x."""
        atom_mass = dict(self.atoms)
        breakpoints = sorted(
            set(atom_mass) | {lo for lo, _, _ in self.segments} | {hi for _, hi, _ in self.segments}
        )

        xs: List[float] = []
        fs: List[float] = []
        cumulative = 0.0
        for j, bp in enumerate(breakpoints):
            if not xs or xs[-1] != bp or fs[-1] != cumulative:
                xs.append(bp)
                fs.append(cumulative)
            if bp in atom_mass:
                cumulative += atom_mass[bp]
                xs.append(bp)
                fs.append(cumulative)
            if j + 1 < len(breakpoints):
                nxt = breakpoints[j + 1]
                cumulative += self._density_on(bp, nxt) * (nxt - bp)

        x = np.array(xs, dtype=float)
        f = np.minimum(np.array(fs, dtype=float), 1.0)
        f[-1] = 1.0
        return x, f

    def _density_on(self, lo: float, hi: float) -> float:
        for seg_lo, seg_hi, density in self.segments:
            if seg_lo <= lo and hi <= seg_hi:
                return density
        return 0.0

    @property
    def total_mass(self) -> float:
        return sum(m for _, m in self.atoms) + sum(d * (hi - lo) for lo, hi, d in self.segments)

    @property
    def support_top(self) -> float:
        """Largest point of the support closure."""
        tops = [loc for loc, _ in self.atoms] + [hi for _, hi, _ in self.segments]
        return max(tops)

    @property
    def breakpoints(self) -> np.ndarray:
        """Atom locations and segment endpoints, sorted and unique."""
        return np.unique(self._knots_x)

    def atom_mass(self, x: float) -> float:
        return dict(self.atoms).get(float(x), 0.0)

    def cdf(self, x) -> Union[float, np.ndarray]:
        """Right-continuous cdf F(x); accepts scalars or arrays."""
        arr, scalar = _as_array(x)
        kx, kf = self._knots_x, self._knots_f
        j = np.searchsorted(kx, arr, side="right")
        out = self._interpolate(arr, j, kx, kf)
        out = np.where(j == 0, 0.0, np.where(j >= len(kx), 1.0, out))
        return float(out[0]) if scalar else out

    def cdf_left(self, x) -> Union[float, np.ndarray]:
        """Left limit F(x^-)."""
        arr, scalar = _as_array(x)
        kx, kf = self._knots_x, self._knots_f
        j = np.searchsorted(kx, arr, side="left")
        jc = np.clip(j, 0, len(kx) - 1)
        at_knot = kx[jc] == arr
        out = np.where(at_knot, kf[jc], self._interpolate(arr, j, kx, kf))
        out = np.where(j == 0, 0.0, np.where(j >= len(kx), 1.0, out))
        return float(out[0]) if scalar else out

    @staticmethod
    def _interpolate(x: np.ndarray, j: np.ndarray, kx: np.ndarray, kf: np.ndarray) -> np.ndarray:
        """Linear interpolation between knots j-1 and j (clipped indices)."""
        lo = np.clip(j - 1, 0, len(kx) - 1)
        hi = np.clip(j, 0, len(kx) - 1)
        width = kx[hi] - kx[lo]
        safe = np.where(width > 0, width, 1.0)
        t = np.where(width > 0, (x - kx[lo]) / safe, 0.0)
        return kf[lo] + t * (kf[hi] - kf[lo])

    def evaluate(self, x: float) -> Tuple[float, float]:
        """Return (F(x), F(x^-)) for a nonnegative bid."""
        if x < 0:
            raise DomainError(f"cdf is evaluated on [0, inf), got x={x}")
        return self.cdf(x), self.cdf_left(x)

    def expectation(self) -> float:
        """Exact expected bid."""
        atoms = sum(loc * m for loc, m in self.atoms)
        continuous = sum(d * (hi * hi - lo * lo) / 2.0 for lo, hi, d in self.segments)
        return atoms + continuous

    def quantile(self, u) -> Union[float, np.ndarray]:
        """Smallest x with F(x) >= u (inverse-cdf transform)."""
        arr, scalar = _as_array(u)
        kx, kf = self._knots_x, self._knots_f
        j = np.clip(np.searchsorted(kf, arr, side="left"), 0, len(kx) - 1)
        prev = np.clip(j - 1, 0, len(kx) - 1)
        rise = kf[j] - kf[prev]
        jump = (kx[j] == kx[prev]) | (rise <= 0)
        t = np.where(jump, 1.0, (arr - kf[prev]) / np.where(rise > 0, rise, 1.0))
        out = np.where(j == 0, kx[0], kx[prev] + t * (kx[j] - kx[prev]))
        return float(out[0]) if scalar else out

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        """Draw bids by inverse-cdf sampling from a caller-owned generator."""
        return self.quantile(rng.random(size))

    def support_intervals(self, gap_tol: float = 0.0) -> List[Tuple[float, float]]:
        """Connected components of the support closure (atoms as [x, x])."""
        pieces = [(loc, loc) for loc, _ in self.atoms] + [(lo, hi) for lo, hi, _ in self.segments]
        return merge_intervals(pieces, gap_tol)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "kind": "piecewise",
            "atoms": [list(a) for a in self.atoms],
            "segments": [list(s) for s in self.segments],
            "cap": self.cap,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseCdf":
        return cls(
            atoms=tuple(tuple(a) for a in data.get("atoms", [])),
            segments=tuple(tuple(s) for s in data.get("segments", [])),
            cap=data.get("cap"),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseCdf):
            return NotImplemented
        return (self.atoms, self.segments, self.cap) == (other.atoms, other.segments, other.cap)

    def __hash__(self) -> int:
        return hash((self.atoms, self.segments, self.cap))


def point_mass(x: float, cap: Optional[float] = None) -> PiecewiseCdf:
    """Pure strategy bidding ``x``."""
    return PiecewiseCdf(atoms=((x, 1.0),), cap=cap)


def uniform(lo: float, hi: float, cap: Optional[float] = None) -> PiecewiseCdf:
    """Uniform distribution on [lo, hi]."""
    return PiecewiseCdf(segments=((lo, hi, 1.0 / (hi - lo)),), cap=cap)


@dataclass(frozen=True, eq=False)
class DiscreteStrategy:
    """Probability vector over the points of a bid grid.

    Attributes:
        grid: The bid grid.
        probs: k+1 nonnegative probabilities summing to 1.
    """

    grid: BidGrid
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (self.grid.k + 1,):
            raise DomainError(
                f"Expected {self.grid.k + 1} probabilities for k={self.grid.k}, got {probs.shape}"
            )
        if np.any(~np.isfinite(probs)) or np.any(probs < -MASS_TOL):
            raise DomainError("Grid probabilities must be finite and nonnegative")
        probs = np.maximum(probs, 0.0)
        if abs(probs.sum() - 1.0) > MASS_TOL:
            raise DomainError(f"Grid probabilities must sum to 1, got {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_cum", np.cumsum(probs))

    @classmethod
    def pure(cls, grid: BidGrid, index: int) -> "DiscreteStrategy":
        probs = np.zeros(grid.k + 1)
        probs[index] = 1.0
        return cls(grid=grid, probs=probs)

    @classmethod
    def normalized(cls, grid: BidGrid, weights: Sequence[float]) -> "DiscreteStrategy":
        """Build from unnormalized weights (rounding drift is removed)."""
        w = np.maximum(np.asarray(weights, dtype=float), 0.0)
        return cls(grid=grid, probs=w / w.sum())

    @property
    def cap(self) -> float:
        return self.grid.T

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        nz = np.flatnonzero(self.probs > 0)
        return tuple((float(self.points[l]), float(self.probs[l])) for l in nz)

    @property
    def segments(self) -> Tuple[Segment, ...]:
        return ()

    @property
    def support_top(self) -> float:
        return float(self.points[np.flatnonzero(self.probs > 0)[-1]])

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array([loc for loc, _ in self.atoms])

    def _snap(self) -> float:
        return 1e-9 * self.grid.spacing

    def atom_mass(self, x: float) -> float:
        l = self.grid.index_of(x)
        return float(self.probs[l]) if abs(self.points[l] - x) <= self._snap() else 0.0

    def cdf(self, x) -> Union[float, np.ndarray]:
        arr, scalar = _as_array(x)
        idx = np.searchsorted(self.points, arr + self._snap(), side="right") - 1
        out = np.where(idx < 0, 0.0, self._cum[np.clip(idx, 0, None)])
        out = np.minimum(out, 1.0)
        return float(out[0]) if scalar else out

    def cdf_left(self, x) -> Union[float, np.ndarray]:
        arr, scalar = _as_array(x)
        idx = np.searchsorted(self.points, arr - self._snap(), side="left") - 1
        out = np.where(idx < 0, 0.0, self._cum[np.clip(idx, 0, None)])
        out = np.minimum(out, 1.0)
        return float(out[0]) if scalar else out

    def evaluate(self, x: float) -> Tuple[float, float]:
        if x < 0:
            raise DomainError(f"cdf is evaluated on [0, inf), got x={x}")
        return self.cdf(x), self.cdf_left(x)

    def expectation(self) -> float:
        return float(self.probs @ self.points)

    def quantile(self, u) -> Union[float, np.ndarray]:
        arr, scalar = _as_array(u)
        idx = np.clip(np.searchsorted(self._cum, arr, side="left"), 0, self.grid.k)
        # skip zero-mass points a u of exactly 0 would land on
        first = int(np.flatnonzero(self.probs > 0)[0])
        out = self.points[np.maximum(idx, first)]
        return float(out[0]) if scalar else out

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        return self.quantile(rng.random(size))

    def support_points(self, min_mass: float = 0.0) -> np.ndarray:
        """Grid points carrying more than ``min_mass``."""
        return self.points[self.probs > min_mass]

    def support_intervals(self, gap_tol: Optional[float] = None, min_mass: float = 0.0):
        """Runs of supported grid points; neighbours closer than ``gap_tol`` merge."""
        if gap_tol is None:
            gap_tol = 1.5 * self.grid.spacing
        pts = self.support_points(min_mass)
        return merge_intervals([(float(p), float(p)) for p in pts], gap_tol)

    def to_piecewise(self) -> PiecewiseCdf:
        """The same distribution as an atoms-only piecewise cdf."""
        return PiecewiseCdf(atoms=self.atoms, cap=self.cap)

    def to_dict(self) -> dict:
        return {"kind": "grid", "grid": self.grid.to_dict(), "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteStrategy":
        return cls.normalized(BidGrid.from_dict(data["grid"]), data["probs"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteStrategy):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.probs, other.probs)

    __hash__ = None  # type: ignore[assignment]


Strategy = Union[PiecewiseCdf, DiscreteStrategy]


def strategy_from_dict(data: dict) -> Strategy:
    """Decode either strategy kind."""
    if data.get("kind") == "grid":
        return DiscreteStrategy.from_dict(data)
    return PiecewiseCdf.from_dict(data)


def merge_intervals(pieces: Sequence[Tuple[float, float]], gap_tol: float = 0.0):
    """Union of closed intervals, joining pieces separated by at most ``gap_tol``."""
    merged: List[List[float]] = []
    for lo, hi in sorted(pieces):
        if merged and lo <= merged[-1][1] + gap_tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def cdf_eval(s: Strategy, x: float) -> Tuple[float, float]:
    """Right and left limits of the cdf at a nonnegative bid."""
    return s.evaluate(x)


def expectation(s: Strategy) -> float:
    """Exact expected bid of a strategy."""
    return s.expectation()


def sample(s: Strategy, rng: np.random.Generator, size: Optional[int] = None):
    """Inverse-cdf draw(s) from ``s``."""
    return s.sample(rng, size)


def discretize(s: Strategy, grid: BidGrid) -> DiscreteStrategy:
    """Project a strategy onto a bid grid with the midpoint rule.

    Grid point l receives the mass of (m_{l-1}, m_l], the end points absorb
    the tails, so an atom sitting on a midpoint goes to the lower point.
    The expected bid moves by at most T/k.
    """
    if s.support_top > grid.T + MASS_TOL * max(1.0, grid.T):
        raise DomainError(f"Support reaches {s.support_top}, beyond the grid cap {grid.T}")

    upper = np.asarray(s.cdf(grid.midpoints()), dtype=float)
    cum = np.concatenate(([0.0], upper, [1.0]))
    probs = np.maximum(np.diff(cum), 0.0)
    return DiscreteStrategy.normalized(grid, probs)
