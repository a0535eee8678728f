"""Run every equilibrium check on a profile."""

import logging
from typing import Optional

from src.models.game import GameSpec
from src.models.profile import EquilibriumProfile
from src.models.reports import DiagnosticsReport
from src.utils.errors import DomainError
from src.verifier.checks import (
    CHECK_BASIS,
    CLOSED_FORM_EPS,
    GRID_EPS,
    check_affine_on_support,
    check_atoms,
    check_bid_bound,
    check_budget_feasibility,
    check_budget_ordering,
    check_epsilon_nash,
    check_support_structure,
    check_threshold_structure,
)

logger = logging.getLogger(__name__)


class EquilibriumVerifier:
    """Certifies or refutes an equilibrium candidate.

    Args:
        k_audit: Resolution of the audit grid for non-grid profiles.
        closed_form_eps: Exploitability tolerance for exact profiles.
        grid_eps: Exploitability (and affine fit) tolerance for grid profiles.
    """

    def __init__(
        self,
        k_audit: int = 10000,
        closed_form_eps: float = CLOSED_FORM_EPS,
        grid_eps: float = GRID_EPS,
    ):
        self.k_audit = k_audit
        self.closed_form_eps = closed_form_eps
        self.grid_eps = grid_eps

    def verify(
        self,
        profile: EquilibriumProfile,
        game: Optional[GameSpec] = None,
        eps_tolerance: Optional[float] = None,
    ) -> DiagnosticsReport:
        game = game or profile.game
        if game.n != profile.n:
            raise DomainError(f"Profile has {profile.n} players, game has {game.n}")
        if game != profile.game:
            logger.warning(f"Verifying a profile built for {profile.game} against {game}")

        if eps_tolerance is None:
            eps_tolerance = self.grid_eps if profile.is_grid else self.closed_form_eps

        logger.info(f"Verifying {profile.regime.value} profile for budgets {list(game.budgets)}")
        checks = [
            check_budget_feasibility(profile, game),
            check_affine_on_support(profile, grid_tolerance=self.grid_eps),
            check_atoms(profile),
            check_support_structure(profile),
            check_budget_ordering(profile, game),
            check_bid_bound(profile, game),
            check_threshold_structure(profile, game),
        ]
        nash = check_epsilon_nash(profile, game, self.k_audit, eps_tolerance)

        if not nash.passed:
            structural = [c.name for c in checks if not c.passed]
            if structural:
                nash.details += f"; structural failures: {', '.join(structural)}"
            else:
                nash.details += (
                    f"; every structural check passes, so the gap is attributed to the "
                    f"audit grid resolution {nash.data['spacing']:.3e}"
                )
        checks.append(nash)

        for check in checks:
            check.basis = CHECK_BASIS[check.name]
            check.details = f"{check.details} [basis: {check.basis}]"
            status = "pass" if check.passed else "FAIL"
            logger.debug(f"{check.name}: {status} (residual {check.residual:.3e}) {check.details}")

        report = DiagnosticsReport(checks=checks)
        if report.overall:
            logger.info("All checks passed")
        else:
            logger.warning(f"Failed checks: {[c.name for c in report.failed()]}")
        return report


def verify_profile(
    profile: EquilibriumProfile,
    game: Optional[GameSpec] = None,
    k_audit: int = 10000,
    eps_tolerance: Optional[float] = None,
) -> DiagnosticsReport:
    """Run every check with default tolerances."""
    return EquilibriumVerifier(k_audit=k_audit).verify(profile, game, eps_tolerance)
