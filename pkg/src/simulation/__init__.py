"""Monte Carlo simulation of strategy profiles."""

from src.simulation.monte_carlo import MonteCarloSimulator, run_simulate

__all__ = ["MonteCarloSimulator", "run_simulate"]
