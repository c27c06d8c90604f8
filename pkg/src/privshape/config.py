"""Experiment configuration: defaults, file parsing, validation.

Config files are flat ``key = value`` lines with ``#`` comments; CLI flags
override file values field by field.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .metrics import DistanceMetric

TASKS = ("clustering", "classification")
MECHANISMS = ("privshape", "baseline")


class ConfigError(ValueError):
    """Invalid configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a run; (config, seed) replays bit for bit."""

    epsilon: float = 4.0
    t: int = 4
    w: int = 10
    l_low: int = 1
    l_high: int = 10
    c: int = 3
    k: int = 2
    p_a: float = 0.02
    p_b: float = 0.08
    p_c: float = 0.70
    p_d: float = 0.20
    metric: str = "sed"
    task: str = "classification"
    mechanism: str = "privshape"
    seed: int = 1
    trials: int = 1
    dataset: str = ""
    baseline_threshold: float = 100.0
    no_sax: bool = False
    no_compress: bool = False
    prefix_match: bool = False
    n_users: int = 0
    round_timeout: float = 30.0
    transcript: str = ""

    def validate(self) -> "ExperimentConfig":
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon: must be positive, got {self.epsilon}")
        if self.t < 2:
            raise ConfigError(f"t: alphabet size must be >= 2, got {self.t}")
        if self.w < 1:
            raise ConfigError(f"w: segment length must be >= 1, got {self.w}")
        if not 1 <= self.l_low <= self.l_high:
            raise ConfigError(f"l_low/l_high: need 1 <= low <= high, got {self.l_low}..{self.l_high}")
        if self.c < 2:
            raise ConfigError(f"c: over-selection constant must be >= 2, got {self.c}")
        if self.k < 1:
            raise ConfigError(f"k: target shape count must be >= 1, got {self.k}")
        for name in ("p_a", "p_b", "p_c", "p_d"):
            frac = getattr(self, name)
            if not 0.0 < frac < 1.0:
                raise ConfigError(f"{name}: population fraction must be in (0,1), got {frac}")
        if abs(self.p_a + self.p_b + self.p_c + self.p_d - 1.0) > 1e-9:
            raise ConfigError("p_a..p_d: population fractions must sum to 1")
        DistanceMetric.from_name(self.metric)
        if self.task not in TASKS:
            raise ConfigError(f"task: expected one of {TASKS}, got {self.task!r}")
        if self.mechanism not in MECHANISMS:
            raise ConfigError(f"mechanism: expected one of {MECHANISMS}, got {self.mechanism!r}")
        if self.mechanism == "baseline" and self.task == "classification":
            raise ConfigError("task: the baseline mechanism emits unlabeled shapes; "
                              "classification needs mechanism=privshape")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.baseline_threshold < 0:
            raise ConfigError(f"baseline_threshold: must be >= 0, got {self.baseline_threshold}")
        if self.round_timeout <= 0:
            raise ConfigError(f"round_timeout: must be positive, got {self.round_timeout}")
        return self

    @property
    def split_fractions(self) -> tuple[float, float, float, float]:
        return (self.p_a, self.p_b, self.p_c, self.p_d)

    @property
    def distance_metric(self) -> DistanceMetric:
        return DistanceMetric.from_name(self.metric)

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **kwargs)

    def echo(self) -> str:
        """Canonical one-line rendering used in output headers."""
        parts = []
        for f in fields(self):
            parts.append(f"{f.name}={getattr(self, f.name)}")
        return " ".join(parts)


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}
_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def coerce_field(name: str, raw: str):
    if name not in _FIELD_TYPES:
        raise ConfigError(f"{name}: unknown configuration key")
    kind = _FIELD_TYPES[name]
    raw = raw.strip()
    try:
        if kind == "bool":
            low = raw.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {raw!r} as {kind}") from None


def load_config_file(path: str | Path) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    values: dict = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        values[key] = coerce_field(key, raw)
    return values


def build_config(file_values: dict | None = None, flag_values: dict | None = None) -> ExperimentConfig:
    merged: dict = {}
    merged.update(file_values or {})
    merged.update(flag_values or {})
    return ExperimentConfig(**merged).validate()
