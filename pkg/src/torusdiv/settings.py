# -*- coding: utf-8 -*-
"""
Run configuration for the torusdiv command line.

Settings live in a JSON file (default `config.json`). Loading keeps only
the known fields and falls back to defaults on a missing or broken file;
saving preserves keys that belong to other tools.
"""

import json
import os
from dataclasses import asdict, dataclass, fields
from typing import Optional

DEFAULT_CONFIG_PATH = "config.json"
THREADS_ENV = "TORUSDIV_THREADS"

OUTPUT_FORMATS = ("text", "json")


class ConfigError(ValueError):
    """Raised when a RunConfig violates its invariants."""


@dataclass
class RunConfig:
    """Holds everything a subcommand needs besides its own arguments."""
    subcommand: str = ""
    instance: Optional[str] = None
    n_max: int = 50
    threshold: float = 0.8
    output: str = "text"  # "text", "json"

    precision: int = 30  # decimal digits for counting parameters
    seed: int = 1234  # randomized factoring only
    threads: int = 1
    point_budget: int = 10 ** 9
    cyclotomic_bound: int = 12

    def validate(self) -> "RunConfig":
        if self.n_max < 1:
            raise ConfigError(f"n_max must be at least 1, got {self.n_max}")
        if not 0 < self.threshold <= 1:
            raise ConfigError(f"threshold must lie in (0, 1], got {self.threshold}")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigError(f"output must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output!r}")
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.precision < 15:
            raise ConfigError(f"precision must be at least 15 digits, got {self.precision}")
        if self.point_budget < 1:
            raise ConfigError(f"point_budget must be positive, got {self.point_budget}")
        return self


def resolve_threads(config: RunConfig) -> int:
    """TORUSDIV_THREADS overrides the configured worker count."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return config.threads
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1, got {value}")
    return value


def load_config(path: str = DEFAULT_CONFIG_PATH) -> RunConfig:
    """Loads settings from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        known = {f.name for f in fields(RunConfig)}
        filtered = {k: v for k, v in data.items() if k in known}
        return RunConfig(**filtered)
    except (FileNotFoundError, json.JSONDecodeError, TypeError, AttributeError):
        return RunConfig()


def save_config(config: RunConfig, path: str = DEFAULT_CONFIG_PATH) -> None:
    """Saves settings to a JSON file, preserving unrelated keys."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            data = {}
    except (FileNotFoundError, json.JSONDecodeError):
        data = {}
    data.update(asdict(config))
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=4)
