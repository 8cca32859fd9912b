"""
Poisson-Forge Configuration

This module loads the YAML configuration that holds every tunable default of
the library and the command-line front end.

Features:
- Layered Configuration:
  • Bundled config.yml with the shipped defaults
  • Optional user file overlaid section by section
  • CLI flags and descriptor options override both (see pipeline)
  • The resolved config is installed for the duration of one problem, so
    engine guards read the same values as the pipeline
- Guards:
  • Arity and degree limits for the polynomial and Gröbner kernels
  • Round limit for bounded closure iteration

Use Cases:
- Tighten the Gröbner guards for a slow machine
- Change the default monomial order for a batch of descriptors
"""

import logging

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Iterator, Optional

import yaml


logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent / "config.yml"


class ConfigError(Exception):
    """Raised when a configuration file cannot be loaded or is malformed."""

    pass


@dataclass(frozen=True)
class ForgeConfig:
    """Resolved configuration values."""

    max_arity: int = 16
    groebner_max_arity: int = 8
    groebner_max_degree: int = 12
    closure_max_rounds: int = 6
    degree_bound: int = 4
    trials: int = 100
    seed: int = 0
    order: str = "grevlex"
    verify_criterion: bool = True
    indent: int = 2


_SECTIONS: dict[str, tuple[str, ...]] = {
    "limits": (
        "max_arity",
        "groebner_max_arity",
        "groebner_max_degree",
        "closure_max_rounds",
    ),
    "defaults": ("degree_bound", "trials", "seed", "order"),
    "groebner": ("verify_criterion",),
    "report": ("indent",),
}


def _read_yaml(path: Path) -> dict[str, Any]:
    """Read one YAML mapping from disk."""
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except Exception as e:
        raise ConfigError(f"Failed to load config from {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a mapping")
    return data


def _flatten(data: dict[str, Any], source: Path) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for section, content in data.items():
        if section not in _SECTIONS:
            raise ConfigError(f"Unknown config section '{section}' in {source}")
        if not isinstance(content, dict):
            raise ConfigError(f"Config section '{section}' must be a mapping")
        for key, value in content.items():
            if key not in _SECTIONS[section]:
                raise ConfigError(f"Unknown config key '{section}.{key}' in {source}")
            values[key] = value
    return values


def load_config(path: Optional[str] = None) -> ForgeConfig:
    """
    Load the bundled configuration, overlaid with an optional user file.

    Args:
        path: Optional path to a user YAML file

    Returns:
        ForgeConfig: Resolved configuration

    Raises:
        ConfigError: If either file is unreadable or contains unknown keys
    """
    values = _flatten(_read_yaml(DEFAULT_CONFIG_PATH), DEFAULT_CONFIG_PATH)
    if path is not None:
        logger.info(f"Overlaying user configuration from: {path}")
        values.update(_flatten(_read_yaml(Path(path)), Path(path)))

    try:
        config = ForgeConfig(**values)
    except TypeError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e

    if config.order not in ("grevlex", "grlex", "lex"):
        raise ConfigError(f"Unknown monomial order in config: {config.order}")
    for name in ("max_arity", "groebner_max_arity", "groebner_max_degree"):
        if int(getattr(config, name)) < 1:
            raise ConfigError(f"Config limit '{name}' must be positive")

    logger.debug(f"Resolved configuration: {config}")
    return config


@lru_cache(maxsize=1)
def default_config() -> ForgeConfig:
    """Bundled configuration, loaded once per process."""
    return load_config()


_ACTIVE: ContextVar[Optional[ForgeConfig]] = ContextVar(
    "poisson_forge_config", default=None
)


def active_config() -> ForgeConfig:
    """Configuration installed by use_config, else the bundled one."""
    return _ACTIVE.get() or default_config()


@contextmanager
def use_config(config: ForgeConfig) -> Iterator[ForgeConfig]:
    """
    Install config as the active configuration inside a with-block.

    The kernels (arity and degree guards, closure rounds, the Gröbner
    post-check) read active_config(), so a user overlay reaches them too.
    """
    token = _ACTIVE.set(config)
    try:
        yield config
    finally:
        _ACTIVE.reset(token)
