"""Run settings: config defaults with optional YAML overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union

import yaml

from . import config
from .errors import ErrorCode, SlpError


@dataclass(frozen=True)
class Settings:
    engine: str = config.DEFAULT_ENGINE
    levels: int = config.DEFAULT_LEVELS
    oracle_cap: int = config.ORACLE_CAP
    telescope_c: int = config.TELESCOPE_C
    ibst_build_c: int = config.IBST_BUILD_C
    repair_max_rules: Optional[int] = config.REPAIR_MAX_RULES
    verify_samples: int = config.VERIFY_SAMPLES
    bench_queries: int = config.BENCH_QUERIES
    bench_threads: int = config.BENCH_THREADS
    seed: int = config.DEFAULT_SEED

    def validate(self) -> "Settings":
        if self.engine not in config.ENGINES:
            raise SlpError(ErrorCode.INVALID_PARAMS, f"engine must be one of {config.ENGINES}, got {self.engine!r}")
        if not 0 <= self.levels <= config.MAX_LEVELS:
            raise SlpError(ErrorCode.INVALID_PARAMS, f"levels must be in [0, {config.MAX_LEVELS}]")
        for name in ("oracle_cap", "verify_samples", "bench_queries", "bench_threads"):
            if getattr(self, name) < 1:
                raise SlpError(ErrorCode.INVALID_PARAMS, f"{name} must be positive")
        if self.seed < 0:
            raise SlpError(ErrorCode.INVALID_PARAMS, "seed must be non-negative")
        return self


_TYPES = {
    "engine": (str,),
    "repair_max_rules": (int, type(None)),
}


def apply_overrides(base: Settings, overrides: Mapping[str, Any]) -> Settings:
    known = {f.name for f in fields(Settings)}
    changes = {}
    for key, value in overrides.items():
        if key not in known:
            raise SlpError(ErrorCode.INVALID_PARAMS, f"unknown setting {key!r}")
        allowed = _TYPES.get(key, (int,))
        if isinstance(value, bool) or not isinstance(value, allowed):
            raise SlpError(ErrorCode.INVALID_PARAMS, f"setting {key!r} has wrong type {type(value).__name__}")
        changes[key] = value
    return replace(base, **changes).validate()


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Defaults, overridden by the YAML mapping at `path` when given."""
    if path is None:
        return Settings()
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if data is None:
        return Settings()
    if not isinstance(data, dict):
        raise SlpError(ErrorCode.INVALID_PARAMS, f"{path}: settings file must hold a mapping")
    return apply_overrides(Settings(), data)
