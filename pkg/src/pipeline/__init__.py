"""Pipeline orchestration module."""

from src.pipeline.orchestrator import LottoPipeline, load_game, load_profile

__all__ = ["LottoPipeline", "load_game", "load_profile"]
