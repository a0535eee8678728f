"""Grid solver: best responses, fictitious play, exploitability."""

from src.solver.best_response import best_response, response_probs, upper_concave_envelope
from src.solver.exploitability import exploitability, exploitability_gaps, grid_probs
from src.solver.fictitious_play import FictitiousPlaySolver, fictitious_play

__all__ = [
    "upper_concave_envelope",
    "best_response",
    "response_probs",
    "exploitability",
    "exploitability_gaps",
    "grid_probs",
    "FictitiousPlaySolver",
    "fictitious_play",
]
