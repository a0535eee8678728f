"""Configuration management."""

import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import yaml

from src.utils.errors import UsageError

# Load environment variables from .env file (optional - graceful fallback)
try:
    from dotenv import load_dotenv

    _project_root = Path(__file__).parent.parent.parent
    load_dotenv(_project_root / ".env")
except ImportError:
    pass

LOG_LEVEL_ENV = "LOTTO_LOG_LEVEL"

COMMANDS = ("solve", "verify", "simulate", "export")
METHODS = ("closed-form", "fictitious-play", "degenerate")
EXPORT_FORMATS = ("csv", "json")


@dataclass
class Config:
    """Solver, verifier and simulation defaults.

    Can be loaded from YAML file or created programmatically.

    Example:
        >>> config = Config.from_yaml("lotto.yaml")
        >>> print(config.grid_k)
    """

    # Grid solver settings
    grid_k: int = 300
    target_eps: float = 1e-3
    max_iters: int = 20000
    checkpoint_every: int = 100

    # Verifier settings
    k_audit: int = 10000
    closed_form_eps: float = 1e-3
    grid_eps: float = 1e-2

    # Simulation settings
    samples: int = 100000
    seed: int = 0
    batch_size: int = 10000

    # Output settings
    output_dir: str = "./output"
    log_level: str = "info"
    show_progress: bool = False

    @classmethod
    def from_yaml(cls, path: str) -> "Config":
        """Load configuration from YAML file.

        Args:
            path: Path to YAML configuration file.

        Returns:
            Config instance.
        """
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}

        return cls(**{k: v for k, v in data.items() if hasattr(cls, k)})

    @classmethod
    def from_env(cls, base: Optional["Config"] = None) -> "Config":
        """Overlay ``LOTTO_*`` environment variables on a config."""
        config = base or cls()
        if os.environ.get(LOG_LEVEL_ENV):
            config.log_level = os.environ[LOG_LEVEL_ENV].strip().lower()
        if os.environ.get("LOTTO_SEED"):
            try:
                config.seed = int(os.environ["LOTTO_SEED"])
            except ValueError as e:
                raise UsageError(f"LOTTO_SEED must be an integer: {e}") from e
        if os.environ.get("LOTTO_OUTPUT_DIR"):
            config.output_dir = os.environ["LOTTO_OUTPUT_DIR"]
        return config

    def to_yaml(self, path: str) -> None:
        """Save configuration to YAML file.

        Args:
            path: Output path for YAML file.
        """
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False)

    def to_dict(self) -> dict:
        """Convert to dictionary."""
        return asdict(self)


@dataclass
class RunConfig:
    """One CLI invocation, validated on construction.

    Attributes:
        command: One of ``solve``, ``verify``, ``simulate``, ``export``.
        method: Solver for ``solve``: closed-form, fictitious-play or degenerate.
        game_path: Game JSON file.
        grid_k: Grid resolution for fictitious play (None: game file, then defaults).
        target_eps: Exploitability at which fictitious play stops.
        max_iters: Iteration cap for fictitious play.
        samples: Monte Carlo rounds.
        seed: Seed for simulation.
        output: Output directory or file.
        profile_path: Profile file (JSON or strategy CSV) for verify, simulate, export.
        k_audit: Audit grid resolution for verify.
        export_format: Target format of export, csv or json.
    """

    command: str
    method: str = "closed-form"
    game_path: Optional[str] = None
    grid_k: Optional[int] = None
    target_eps: float = 1e-3
    max_iters: int = 20000
    samples: int = 100000
    seed: int = 0
    output: str = "./output"
    profile_path: Optional[str] = None
    k_audit: int = 10000
    export_format: str = "csv"

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"Unknown command: {self.command}. Available: {', '.join(COMMANDS)}")
        if self.method not in METHODS:
            raise UsageError(f"Unknown method: {self.method}. Available: {', '.join(METHODS)}")
        if self.command == "simulate" and self.samples < 1:
            raise UsageError(f"samples must be >= 1, got {self.samples}")
        if self.method == "fictitious-play" and self.grid_k is not None and self.grid_k < 1:
            raise UsageError(f"grid_k must be >= 1, got {self.grid_k}")
        if self.max_iters < 1:
            raise UsageError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.target_eps < 0:
            raise UsageError(f"target_eps must be nonnegative, got {self.target_eps}")
        if self.export_format not in EXPORT_FORMATS:
            raise UsageError(f"Unknown format: {self.export_format}. Available: csv, json")
        if self.command in ("verify", "simulate", "export") and not self.profile_path:
            raise UsageError(f"{self.command} needs a profile file")
        if self.command == "solve" and not self.game_path:
            raise UsageError("solve needs a game config file")

    @classmethod
    def from_config(cls, command: str, config: Config, **overrides) -> "RunConfig":
        """Build a run from defaults, letting non-None overrides win."""
        values = {
            "target_eps": config.target_eps,
            "max_iters": config.max_iters,
            "samples": config.samples,
            "seed": config.seed,
            "output": config.output_dir,
            "k_audit": config.k_audit,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(command=command, **values)

    def to_dict(self) -> dict:
        """Convert to dictionary."""
        return asdict(self)
