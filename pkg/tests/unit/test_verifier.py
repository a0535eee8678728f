"""Unit tests for the equilibrium verifier."""

import numpy as np
import pytest

from src.closed_form import solve_closed_form, solve_two_player_unbounded
from src.models import (
    BidGrid,
    DiscreteStrategy,
    EquilibriumProfile,
    GameSpec,
    PiecewiseCdf,
    Regime,
    uniform,
)
from src.solver import fictitious_play
from src.utils.errors import DomainError
from src.verifier import (
    EquilibriumVerifier,
    CHECK_BASIS,
    audit_grid,
    check_affine_on_support,
    check_atoms,
    check_bid_bound,
    check_budget_feasibility,
    check_budget_ordering,
    check_epsilon_nash,
    check_support_structure,
    check_threshold_structure,
    verify_profile,
)
from src.verifier.support import dust_threshold, interior_atoms


def make_profile(game: GameSpec, *strategies) -> EquilibriumProfile:
    return EquilibriumProfile(game=game, strategies=strategies, regime=Regime.GRID_SOLVED)


class TestAffineOnSupport:
    """Tests for check_affine_on_support."""

    def test_low_budget_profile(self, low_budget_profile):
        result = check_affine_on_support(low_budget_profile)

        assert result.passed
        assert result.residual < 1e-9
        assert result.data["a"] == pytest.approx([0.25, 0.5])
        assert result.data["b"] == pytest.approx([0.5, 0.0], abs=1e-9)

    def test_symmetric_profile(self):
        profile = solve_closed_form(GameSpec(budgets=(1.0, 1.0), threshold=3.0))

        result = check_affine_on_support(profile)

        assert result.passed
        assert result.data["a"] == pytest.approx([0.5, 0.5])
        assert result.data["b"] == pytest.approx([0.0, 0.0], abs=1e-9)

    def test_mid_budget_profile(self, mid_budget_profile):
        result = check_affine_on_support(mid_budget_profile)

        assert result.passed
        assert result.data["a"] == pytest.approx([2 / 9, 1 / 3])
        assert result.data["b"] == pytest.approx([1 / 3, 0.0], abs=1e-9)

    def test_degenerate_profile(self, degenerate_profile):
        assert check_affine_on_support(degenerate_profile).passed

    def test_supports_of_different_length(self, low_budget_game):
        profile = make_profile(low_budget_game, uniform(0.0, 2.0), uniform(0.0, 1.0))

        result = check_affine_on_support(profile)

        assert not result.passed
        assert "player 0" in result.details


class TestAtoms:
    """Tests for check_atoms."""

    def test_mid_budget_atoms_only_at_ends(self, mid_budget_profile):
        assert check_atoms(mid_budget_profile).passed

    def test_degenerate_profile(self, degenerate_profile):
        assert check_atoms(degenerate_profile).passed

    def test_shared_interior_atom(self):
        game = GameSpec(budgets=(1.0, 1.0), threshold=3.0)
        s = PiecewiseCdf(atoms=((1.0, 0.5),), segments=((0.0, 2.0, 0.25),))

        result = check_atoms(make_profile(game, s, s))

        assert not result.passed
        assert result.residual == pytest.approx(0.5)
        assert result.data["shared"] == [1.0]

    def test_grid_spike_is_an_atom(self):
        grid = BidGrid(k=20, T=20.0)
        probs = np.zeros(21)
        probs[10] = 1.0
        s = DiscreteStrategy.normalized(grid, probs)

        assert interior_atoms(s, 0.0, 20.0) == [(10.0, 1.0)]

    def test_grid_plateau_is_not_an_atom(self):
        grid = BidGrid(k=100, T=10.0)
        s = DiscreteStrategy.normalized(grid, np.r_[np.ones(100), 0.0])

        assert interior_atoms(s, 0.0, 10.0) == []

    def test_dust_threshold(self):
        grid = BidGrid(k=100, T=1.0)
        probs = [0.5] + [0.5 / 100] * 100
        s = DiscreteStrategy.normalized(grid, probs)

        assert dust_threshold(s) == pytest.approx(10 * 0.005 / 100)

    def test_dust_threshold_stays_below_the_peak(self):
        s = DiscreteStrategy(grid=BidGrid(k=2, T=2.0), probs=[0.6, 0.0, 0.4])

        assert dust_threshold(s) == pytest.approx(0.2)
        assert s.support_points(dust_threshold(s)).tolist() == [0.0, 2.0]


class TestSupportStructure:
    """Tests for check_support_structure."""

    def test_low_budget_profile(self, low_budget_profile):
        result = check_support_structure(low_budget_profile)

        assert result.passed
        assert result.data["L"] == pytest.approx(2.0)

    def test_support_away_from_zero(self):
        game = GameSpec(budgets=(1.0, 1.5), threshold=3.0)
        profile = make_profile(game, uniform(0.0, 2.0), uniform(1.0, 2.0))

        result = check_support_structure(profile)

        assert not result.passed
        assert "player 1" in result.details

    def test_not_applicable_at_threshold(self, mid_budget_profile):
        result = check_support_structure(mid_budget_profile)

        assert result.passed
        assert not result.applicable

    def test_coarse_grid_profile(self):
        grid = BidGrid(k=10, T=10.0)
        s = DiscreteStrategy.normalized(grid, [1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0])
        profile = make_profile(GameSpec(budgets=(2.0, 2.0), threshold=10.0), s, s)

        result = check_support_structure(profile)

        assert result.passed
        assert result.data["L"] == pytest.approx(4.0)

    def test_empty_support_fails(self, low_budget_profile, monkeypatch):
        monkeypatch.setattr("src.verifier.checks.support_pieces", lambda s, gap_scale=1.0: [])

        result = check_support_structure(low_budget_profile)

        assert not result.passed
        assert result.data["empty"] == [0, 1]


class TestBudgetOrdering:
    """Tests for check_budget_ordering."""

    def test_low_budget_profile(self, low_budget_profile, low_budget_game):
        result = check_budget_ordering(low_budget_profile, low_budget_game)

        assert result.passed
        assert result.data["F0"] == pytest.approx([0.0, 0.5])

    def test_equal_budgets(self):
        game = GameSpec(budgets=(1.0, 1.0), threshold=3.0)

        assert check_budget_ordering(solve_closed_form(game), game).passed

    def test_poorer_player_without_atom_at_zero(self, low_budget_game):
        profile = make_profile(low_budget_game, uniform(0.0, 2.0), uniform(0.0, 1.0))

        result = check_budget_ordering(profile, low_budget_game)

        assert not result.passed
        assert "no atom at 0" in result.details

    def test_richest_player_with_atom_at_zero(self, low_budget_game):
        rich = PiecewiseCdf(atoms=((0.0, 0.5),), segments=((0.0, 2.0, 0.25),), cap=3.0)
        profile = make_profile(low_budget_game, rich, uniform(0.0, 2.0, cap=3.0))

        result = check_budget_ordering(profile, low_budget_game)

        assert not result.passed
        assert "largest budget" in result.details

    def test_not_applicable_when_degenerate(self, degenerate_profile, degenerate_game):
        result = check_budget_ordering(degenerate_profile, degenerate_game)

        assert result.passed
        assert not result.applicable


class TestBidBound:
    """Tests for check_bid_bound."""

    def test_unbounded_game(self):
        profile = solve_two_player_unbounded(GameSpec(budgets=(1.0, 0.5)))

        result = check_bid_bound(profile, profile.game)

        assert result.passed
        assert result.applicable
        assert result.data == {"max_support_point": 2.0, "bound": 32.0}

    def test_bid_above_bound(self):
        game = GameSpec(budgets=(1.0, 1.0))
        outlier = PiecewiseCdf(atoms=((0.0, 0.975), (40.0, 0.025)))

        result = check_bid_bound(make_profile(game, outlier, uniform(0.0, 2.0)), game)

        assert not result.passed
        assert result.residual == pytest.approx(8.0)

    def test_not_applicable_below_bound(self, low_budget_profile, low_budget_game):
        result = check_bid_bound(low_budget_profile, low_budget_game)

        assert result.passed
        assert not result.applicable


class TestEpsilonNash:
    """Tests for check_epsilon_nash."""

    def test_degenerate_profile(self, degenerate_profile, degenerate_game):
        result = check_epsilon_nash(degenerate_profile, degenerate_game, k_audit=1000)

        assert result.passed
        assert result.residual == pytest.approx(0.0, abs=1e-12)

    def test_high_budget_profile(self):
        game = GameSpec(budgets=(5.0, 0.8), threshold=2.0)

        result = check_epsilon_nash(solve_closed_form(game), game, k_audit=1000)

        assert result.residual == pytest.approx(0.0, abs=1e-12)

    def test_perturbed_profile_fails(self, low_budget_profile, low_budget_game):
        F1, _ = low_budget_profile.strategies
        moved = PiecewiseCdf(atoms=((0.0, 0.4), (2.0, 0.1)), segments=((0.0, 2.0, 0.25),), cap=3.0)
        profile = make_profile(low_budget_game, F1, moved)

        result = check_epsilon_nash(profile, low_budget_game, k_audit=3000)

        assert not result.passed
        assert result.residual > 0.01

    def test_audit_grid_for_unbounded_game(self):
        profile = solve_two_player_unbounded(GameSpec(budgets=(1.0, 0.5)))

        grid = audit_grid(profile, profile.game, 1000)

        assert grid.k == 1000
        assert grid.T == pytest.approx(2.002)

    def test_audit_grid_too_coarse(self, low_budget_profile, low_budget_game):
        with pytest.raises(DomainError):
            audit_grid(low_budget_profile, low_budget_game, 100)


class TestThresholdStructure:
    """Tests for check_threshold_structure."""

    def test_degenerate_profile(self, degenerate_profile, degenerate_game):
        assert check_threshold_structure(degenerate_profile, degenerate_game).passed

    def test_mid_budget_profile(self, mid_budget_profile, mid_budget_game):
        result = check_threshold_structure(mid_budget_profile, mid_budget_game)

        assert result.passed
        assert result.data["players_at_T"] == [0, 1]
        assert result.data["L_prime"] == pytest.approx(1.0)

    def test_single_player_at_threshold(self, mid_budget_profile, mid_budget_game):
        F1, _ = mid_budget_profile.strategies
        profile = make_profile(mid_budget_game, F1, uniform(0.0, 1.5, cap=2.0))

        result = check_threshold_structure(profile, mid_budget_game)

        assert not result.passed
        assert "only player 0" in result.details

    def test_not_applicable_without_threshold(self):
        profile = solve_two_player_unbounded(GameSpec(budgets=(1.0, 0.5)))

        assert not check_threshold_structure(profile, profile.game).applicable


class TestBudgetFeasibility:
    """Tests for check_budget_feasibility."""

    def test_closed_form(self, low_budget_profile, low_budget_game):
        result = check_budget_feasibility(low_budget_profile, low_budget_game)

        assert result.passed
        assert result.data["slack"] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_overspending(self, low_budget_game):
        profile = make_profile(low_budget_game, uniform(0.0, 2.0), uniform(0.0, 2.0))

        result = check_budget_feasibility(profile, low_budget_game)

        assert not result.passed
        assert result.residual == pytest.approx(0.5)


class TestEquilibriumVerifier:
    """Tests for the full verifier run."""

    CHECKS = [
        "budget_feasibility",
        "affine_utility_on_support",
        "no_shared_interior_atoms",
        "support_structure",
        "budget_ordering",
        "bid_bound",
        "threshold_structure",
        "epsilon_nash",
    ]

    def test_low_budget_profile(self, low_budget_profile):
        report = verify_profile(low_budget_profile)

        assert report.overall
        assert [c.name for c in report.checks] == self.CHECKS

    def test_mid_budget_profile(self, mid_budget_profile):
        report = EquilibriumVerifier(k_audit=10000).verify(mid_budget_profile)

        assert report.overall
        assert report.get("threshold_structure").data["players_at_T"] == [0, 1]

    def test_degenerate_profile(self, degenerate_profile):
        report = verify_profile(degenerate_profile, k_audit=1000)

        assert report.overall

    def test_failure_is_attributed(self, low_budget_game):
        profile = make_profile(low_budget_game, uniform(0.0, 2.0), uniform(0.0, 1.0))

        report = verify_profile(profile, k_audit=1000)
        nash = report.get("epsilon_nash")

        assert not report.overall
        assert not nash.passed
        assert "structural failures" in nash.details
        assert report.failed()

    def test_report_json(self, low_budget_profile, temp_dir):
        path = temp_dir / "diagnostics.json"

        verify_profile(low_budget_profile, k_audit=1000).save_json(str(path))

        text = path.read_text()
        assert '"overall": true' in text
        assert '"pass": true' in text

    def test_player_count_mismatch(self, low_budget_profile, degenerate_game):
        with pytest.raises(DomainError):
            verify_profile(low_budget_profile, degenerate_game)

    def test_coarse_grid_solver_output(self):
        game = GameSpec(budgets=(5.0, 0.8), threshold=2.0)
        solved = fictitious_play(game, BidGrid(k=2, T=2.0), max_iters=50)

        report = verify_profile(solved.profile)

        assert [c.name for c in report.checks] == self.CHECKS
        assert report.get("epsilon_nash").data["k"] == 2
        assert report.get("epsilon_nash").residual == pytest.approx(solved.exploitability, abs=1e-9)

    def test_every_check_names_its_basis(self, low_budget_profile):
        report = verify_profile(low_budget_profile)

        for check in report.checks:
            assert check.basis == CHECK_BASIS[check.name]
            assert check.basis in check.details
            assert check.to_dict()["basis"] == check.basis
