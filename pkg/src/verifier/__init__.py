"""Equilibrium verifier."""

from src.verifier.checks import (
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
)
from src.verifier.verifier import EquilibriumVerifier, verify_profile

__all__ = [
    "CHECK_BASIS",
    "audit_grid",
    "check_affine_on_support",
    "check_atoms",
    "check_support_structure",
    "check_budget_ordering",
    "check_bid_bound",
    "check_epsilon_nash",
    "check_threshold_structure",
    "check_budget_feasibility",
    "EquilibriumVerifier",
    "verify_profile",
]
