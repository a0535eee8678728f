"""
Lotto Equilibria - equilibria of multiplayer General Lotto games on one battlefield.

This package provides tools for:
- Evaluating winning probabilities and expected utilities under uniform tie-breaking
- Building closed-form equilibria (two players, and the degenerate threshold case)
- Solving the discretized game by fictitious play with exact exploitability
- Verifying equilibrium properties of any strategy profile
- Cross-checking profiles by seeded Monte Carlo play
"""

__version__ = "1.0.0"
__author__ = "Lotto Equilibria Team"

from src.pipeline.orchestrator import LottoPipeline

__all__ = ["LottoPipeline", "__version__"]
