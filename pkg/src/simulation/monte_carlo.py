"""Seeded Monte Carlo play of a strategy profile."""

import logging

import numpy as np
from tqdm import tqdm

from src.models.profile import EquilibriumProfile
from src.models.reports import SimulationResult
from src.utils.errors import UsageError

logger = logging.getLogger(__name__)


class MonteCarloSimulator:
    """Plays a profile round by round and tallies who wins the battlefield.

    Each round every player draws an independent bid; the highest bid wins
    and ties go to a uniformly random member of the tied group. Rounds are
    drawn in batches, each batch from its own generator spawned from the
    root seed, so a (seed, batch_size) pair fixes the result bit for bit.

    Example:
        >>> sim = MonteCarloSimulator(profile)
        >>> result = sim.run(samples=100_000, seed=0)
        >>> result.win_share
    """

    def __init__(self, profile: EquilibriumProfile, show_progress: bool = False):
        self.profile = profile
        self.show_progress = show_progress

    def _play_batch(self, rng: np.random.Generator, size: int) -> tuple:
        strategies = self.profile.strategies
        bids = np.column_stack([np.asarray(s.sample(rng, size), dtype=float) for s in strategies])

        top = bids.max(axis=1, keepdims=True)
        tied = bids == top
        keys = np.where(tied, rng.random(bids.shape), -1.0)
        winners = np.argmax(keys, axis=1)

        wins = np.bincount(winners, minlength=len(strategies)).astype(float)
        ties = float(np.count_nonzero(tied.sum(axis=1) > 1))
        return wins, bids.sum(axis=0), (bids * bids).sum(axis=0), ties

    def run(self, samples: int, seed: int = 0, batch_size: int = 10000) -> SimulationResult:
        """Simulate ``samples`` rounds.

        Raises:
            UsageError: If ``samples`` or ``batch_size`` is below 1.
        """
        if samples < 1:
            raise UsageError(f"samples must be >= 1, got {samples}")
        if batch_size < 1:
            raise UsageError(f"batch_size must be >= 1, got {batch_size}")

        n = self.profile.n
        n_batches = -(-samples // batch_size)
        children = np.random.SeedSequence(seed).spawn(n_batches)

        wins = np.zeros(n)
        bid_sum = np.zeros(n)
        bid_sq = np.zeros(n)
        ties = 0.0
        remaining = samples

        logger.info(f"Simulating {samples} rounds in {n_batches} batch(es), seed={seed}")
        for child in tqdm(children, desc="Simulating", disable=not self.show_progress):
            size = min(batch_size, remaining)
            batch = self._play_batch(np.random.default_rng(child), size)
            wins += batch[0]
            bid_sum += batch[1]
            bid_sq += batch[2]
            ties += batch[3]
            remaining -= size

        share = wins / samples
        mean_bid = bid_sum / samples
        var_bid = np.maximum(bid_sq / samples - mean_bid**2, 0.0)
        denom = max(samples - 1, 1)

        result = SimulationResult(
            win_share=share.tolist(),
            win_share_se=np.sqrt(share * (1.0 - share) / denom).tolist(),
            mean_bid=mean_bid.tolist(),
            mean_bid_se=np.sqrt(var_bid / denom).tolist(),
            tie_rate=ties / samples,
            samples=samples,
            seed=seed,
        )
        logger.info(f"Win shares {np.round(share, 4).tolist()}, tie rate {result.tie_rate:.4f}")
        return result


def run_simulate(
    profile: EquilibriumProfile,
    samples: int = 100000,
    seed: int = 0,
    batch_size: int = 10000,
    show_progress: bool = False,
) -> SimulationResult:
    """Monte Carlo estimate of every player's win share and mean bid."""
    return MonteCarloSimulator(profile, show_progress=show_progress).run(
        samples=samples, seed=seed, batch_size=batch_size
    )
