"""Unit tests for Monte Carlo simulation."""

import numpy as np
import pytest

from src.closed_form import solve_closed_form
from src.models import EquilibriumProfile, GameSpec, Regime, point_mass
from src.simulation import MonteCarloSimulator, run_simulate
from src.utility import utility_profile
from src.utils.errors import UsageError

# Allowed deviation, in standard errors.
SE_FACTOR = 3.0


class TestMonteCarloSimulator:
    """Tests for MonteCarloSimulator."""

    def test_low_budget_matches_exact_utilities(self, low_budget_profile):
        result = run_simulate(low_budget_profile, samples=100000, seed=0)

        for share, se, exact in zip(result.win_share, result.win_share_se, [0.75, 0.25]):
            assert abs(share - exact) <= SE_FACTOR * se
        for bid, se, budget in zip(result.mean_bid, result.mean_bid_se, [1.0, 0.5]):
            assert abs(bid - budget) <= SE_FACTOR * se
        assert result.share_sum == pytest.approx(1.0)

    def test_shares_match_expected_utility(self, mid_budget_profile):
        result = run_simulate(mid_budget_profile, samples=50000, seed=3)
        exact = utility_profile(mid_budget_profile.strategies)

        for share, se, u in zip(result.win_share, result.win_share_se, exact):
            assert abs(share - u) <= SE_FACTOR * se

    def test_ties_are_split(self):
        game = GameSpec(budgets=(2.0, 2.0), threshold=2.0)
        profile = EquilibriumProfile(
            game=game,
            strategies=(point_mass(2.0, cap=2.0), point_mass(2.0, cap=2.0)),
            regime=Regime.DEGENERATE_THRESHOLD,
        )

        result = run_simulate(profile, samples=20000, seed=1)

        assert result.tie_rate == 1.0
        for share, se in zip(result.win_share, result.win_share_se):
            assert abs(share - 0.5) <= SE_FACTOR * se
        assert result.mean_bid == [2.0, 2.0]
        assert result.mean_bid_se == [0.0, 0.0]

    def test_degenerate_profile(self):
        profile = solve_closed_form(GameSpec(budgets=(5.0, 0.8), threshold=2.0))

        result = run_simulate(profile, samples=20000, seed=2)

        share, se = result.win_share[1], result.win_share_se[1]
        assert abs(share - 0.2) <= SE_FACTOR * se
        assert result.tie_rate == pytest.approx(0.4, abs=0.02)

    def test_same_seed_is_reproducible(self, low_budget_profile):
        first = run_simulate(low_budget_profile, samples=5000, seed=42, batch_size=1000)
        second = run_simulate(low_budget_profile, samples=5000, seed=42, batch_size=1000)

        assert first.to_dict() == second.to_dict()

    def test_different_seeds_differ(self, low_budget_profile):
        first = run_simulate(low_budget_profile, samples=5000, seed=1)
        second = run_simulate(low_budget_profile, samples=5000, seed=2)

        assert first.win_share != second.win_share

    def test_partial_last_batch(self, low_budget_profile):
        result = MonteCarloSimulator(low_budget_profile).run(samples=25, seed=0, batch_size=10)

        assert result.samples == 25
        assert sum(result.win_share) == pytest.approx(1.0)
        assert np.all(np.array(result.mean_bid) >= 0)

    def test_result_json(self, low_budget_profile, temp_dir):
        path = temp_dir / "simulation.json"

        run_simulate(low_budget_profile, samples=100, seed=0).save_json(str(path))

        assert '"share_sum"' in path.read_text()

    @pytest.mark.parametrize("samples,batch_size", [(0, 10), (-5, 10), (10, 0)])
    def test_invalid_sizes(self, low_budget_profile, samples, batch_size):
        with pytest.raises(UsageError):
            run_simulate(low_budget_profile, samples=samples, batch_size=batch_size)
