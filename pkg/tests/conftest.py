"""Pytest configuration and fixtures."""

import random
from collections.abc import Callable
from pathlib import Path

import pytest
import yaml

from fracmatch.arith import BinomialCache
from fracmatch.core.config import get_settings
from fracmatch.core.logging import configure_logging
from fracmatch.schemas.sweep import SweepConfig


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so monkeypatched environment variables take effect."""
    get_settings.cache_clear()
    configure_logging("WARNING")
    yield
    get_settings.cache_clear()


@pytest.fixture
def cache() -> BinomialCache:
    """Create an empty binomial cache."""
    return BinomialCache()


@pytest.fixture
def rng() -> random.Random:
    """Create a seeded random generator."""
    return random.Random(20240611)


@pytest.fixture
def sweep_config(tmp_path: Path) -> Callable[..., SweepConfig]:
    """Factory for small sweep configurations writing under tmp_path."""

    def make(**overrides) -> SweepConfig:
        values = {
            "n_min": 2,
            "n_max": 40,
            "workers": 1,
            "out_path": str(tmp_path / "sweep.jsonl"),
            "checkpoint_path": str(tmp_path / "sweep.checkpoint.json"),
        }
        values.update(overrides)
        return SweepConfig(**values)

    return make


@pytest.fixture
def run_file(tmp_path: Path) -> Callable[[dict], str]:
    """Write a YAML run file and return its path."""

    def write(data: dict, name: str = "run.yaml") -> str:
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        return str(path)

    return write
