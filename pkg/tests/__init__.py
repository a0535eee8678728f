"""Tests for Lotto Equilibria."""
