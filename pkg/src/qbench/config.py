"""Run configuration: defaults, YAML config file, and the QBENCH_CONFIG variable."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction

import yaml

from .summation import EngineConfig

ENV_VAR = "QBENCH_CONFIG"
FORMATS = ("text", "json")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    default_order: int | None = None      # None: each record's own order
    margin: int = 5
    hard_cap_factor: float = 10
    parallelism: int = 1
    output_format: str = "text"
    expand_order: int = 20

    def __post_init__(self):
        if self.default_order is not None and self.default_order < 1:
            raise ConfigError("default_order must be at least 1")
        if self.margin < 1:
            raise ConfigError("margin must be at least 1")
        if self.hard_cap_factor <= 0:
            raise ConfigError("hard_cap_factor must be positive")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output_format must be one of {', '.join(FORMATS)}")
        if self.expand_order < 0:
            raise ConfigError("expand_order must be non-negative")

    def engine(self) -> EngineConfig:
        return EngineConfig(self.margin, self.hard_cap_factor)

    def to_dict(self) -> dict:
        return asdict(self)


_ALIASES = {"defaultOrder": "default_order", "safetyMargin": "margin", "hardCapFactor": "hard_cap_factor",
            "outputFormat": "output_format", "expandOrder": "expand_order"}


def _coerce(name: str, value):
    if name == "hard_cap_factor":
        return float(Fraction(str(value)))
    if name == "output_format":
        return str(value)
    if value is None and name == "default_order":
        return None
    return int(value)


def from_mapping(data: dict, base: RunConfig | None = None) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    updates = {}
    for key, value in (data or {}).items():
        name = _ALIASES.get(key, key)
        if name not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            updates[name] = _coerce(name, value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad value for {key}: {value!r}") from e
    return replace(base or RunConfig(), **updates)


def load_config(path: str | None = None) -> RunConfig:
    """Explicit path, else $QBENCH_CONFIG, else built-in defaults."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"config {path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return from_mapping(data)
