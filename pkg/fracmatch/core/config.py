"""Application configuration using pydantic-settings."""

from functools import lru_cache
from pathlib import Path
from typing import Any

import psutil
import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _default_jobs() -> int:
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


class Settings(BaseSettings):
    """Suite settings loaded from environment variables and an optional .env file."""

    model_config = SettingsConfigDict(
        env_prefix="FRACMATCH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # App Info
    app_name: str = "fracmatch"
    app_version: str = "0.1.0"
    debug: bool = False
    log_level: str = "INFO"

    # Worker pool
    jobs: int = Field(default_factory=_default_jobs, ge=1)

    # Output
    data_dir: str = "."

    # Oracle caps
    oracle_n_cap: int = Field(default=8, ge=2)
    lp_edge_cap: int = Field(default=200, ge=1)

    # Sweep filter
    filter_slack_bits: float = Field(default=32.0, gt=0)

    # Determinism
    seed: int = 0

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Accept lowercase level names."""
        return str(v).upper()

    @property
    def data_path(self) -> Path:
        """Default directory for ledgers and reports."""
        return Path(self.data_dir)


class RunFile:
    """Run parameters loaded from a YAML file (``--config``)."""

    def __init__(self, config_path: str | None = None):
        self._config: dict[str, Any] = {}
        if config_path:
            self.load(config_path)

    def load(self, config_path: str) -> None:
        """Load run parameters from a YAML file."""
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Run file not found: {config_path}")
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"Run file must hold a mapping, got {type(data).__name__}")
        self._config = data

    def get(self, key: str, default: Any = None) -> Any:
        """Get a parameter by key."""
        return self._config.get(key, default)

    def as_dict(self) -> dict[str, Any]:
        """All parameters, unvalidated."""
        return dict(self._config)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
