"""Unit tests for configuration and logging setup."""

import logging

import pytest
from rich.console import Console
from rich.logging import RichHandler

from src.utils.config import Config, RunConfig
from src.utils.errors import UsageError
from src.utils.logger import resolve_log_level, setup_logger


class TestConfig:
    """Tests for Config."""

    def test_defaults(self):
        config = Config()

        assert config.grid_k == 300
        assert config.target_eps == 1e-3
        assert config.max_iters == 20000
        assert config.k_audit == 10000
        assert config.samples == 100000
        assert config.seed == 0

    def test_from_yaml(self, temp_dir):
        path = temp_dir / "lotto.yaml"
        path.write_text("grid_k: 50\nseed: 7\nunknown_key: 1\n")

        config = Config.from_yaml(str(path))

        assert config.grid_k == 50
        assert config.seed == 7
        assert config.max_iters == 20000

    def test_empty_yaml(self, temp_dir):
        path = temp_dir / "empty.yaml"
        path.write_text("")

        assert Config.from_yaml(str(path)) == Config()

    def test_yaml_round_trip(self, temp_dir):
        path = temp_dir / "nested" / "lotto.yaml"
        config = Config(grid_k=120, output_dir="/tmp/out")

        config.to_yaml(str(path))

        assert Config.from_yaml(str(path)) == config

    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("LOTTO_LOG_LEVEL", " DEBUG ")
        monkeypatch.setenv("LOTTO_SEED", "12")
        monkeypatch.setenv("LOTTO_OUTPUT_DIR", "/tmp/lotto")

        config = Config.from_env()

        assert config.log_level == "debug"
        assert config.seed == 12
        assert config.output_dir == "/tmp/lotto"

    def test_from_env_keeps_base(self, monkeypatch):
        monkeypatch.delenv("LOTTO_SEED", raising=False)
        monkeypatch.delenv("LOTTO_LOG_LEVEL", raising=False)
        monkeypatch.delenv("LOTTO_OUTPUT_DIR", raising=False)

        config = Config.from_env(Config(seed=5))

        assert config.seed == 5

    def test_invalid_seed_in_env(self, monkeypatch):
        monkeypatch.setenv("LOTTO_SEED", "abc")

        with pytest.raises(UsageError):
            Config.from_env()


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_solve(self):
        run = RunConfig(command="solve", game_path="game.json")

        assert run.method == "closed-form"
        assert run.export_format == "csv"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"command": "train", "game_path": "game.json"},
            {"command": "solve", "game_path": "game.json", "method": "lp"},
            {"command": "solve"},
            {"command": "verify"},
            {"command": "simulate", "profile_path": "p.json", "samples": 0},
            {"command": "solve", "game_path": "g.json", "method": "fictitious-play", "grid_k": 0},
            {"command": "solve", "game_path": "game.json", "max_iters": 0},
            {"command": "solve", "game_path": "game.json", "target_eps": -1.0},
            {"command": "export", "profile_path": "p.json", "export_format": "xml"},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(UsageError):
            RunConfig(**kwargs)

    def test_from_config_uses_defaults(self):
        config = Config(samples=500, seed=9, output_dir="out")

        run = RunConfig.from_config("simulate", config, profile_path="p.json")

        assert run.samples == 500
        assert run.seed == 9
        assert run.output == "out"

    def test_from_config_overrides(self):
        config = Config(samples=500, seed=9)

        run = RunConfig.from_config(
            "simulate", config, profile_path="p.json", samples=20, seed=None
        )

        assert run.samples == 20
        assert run.seed == 9


class TestLogging:
    """Tests for log level resolution and logger setup."""

    @pytest.mark.parametrize(
        "value,level",
        [
            ("error", logging.ERROR),
            ("INFO", logging.INFO),
            ("debug", logging.DEBUG),
            (None, logging.INFO),
            ("", logging.INFO),
            (logging.WARNING, logging.WARNING),
        ],
    )
    def test_resolve_log_level(self, value, level):
        assert resolve_log_level(value) == level

    def test_verbose_wins(self):
        assert resolve_log_level("error", verbose=True) == logging.DEBUG

    def test_unknown_level_falls_back(self, caplog):
        with caplog.at_level(logging.WARNING):
            assert resolve_log_level("chatty") == logging.INFO

        assert "chatty" in caplog.text
        assert caplog.records[-1].name == "src.utils.logger"

    def test_setup_logger(self, temp_dir):
        log_file = temp_dir / "logs" / "lotto.log"

        logger = setup_logger("test_lotto", level=logging.DEBUG, log_file=str(log_file))
        logger.debug("hello")

        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 2
        for handler in logger.handlers:
            handler.flush()
        assert "hello" in log_file.read_text()

    def test_setup_logger_with_console(self):
        logger = setup_logger("test_lotto_rich", console=Console(quiet=True))

        assert isinstance(logger.handlers[0], RichHandler)

    def test_setup_logger_replaces_handlers(self):
        setup_logger("test_lotto_twice")
        logger = setup_logger("test_lotto_twice")

        assert len(logger.handlers) == 1
