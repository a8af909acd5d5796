"""Experiment configuration: a YAML file mapped onto plain dataclasses.

Example::

    scenario: poisson100
    seed: 2024
    replications: 10000
    system:
      arrival: {family: exponential, rate: 1.0}
      service: {family: lognormal, mu: -0.25, sigma: 0.5}
      lam: 100.0
      nu: 1.0
      alpha: 1.0
      epsilon_fraction: 0.5
    levels: {test: 0.01}
    horizons: [600, 1000, 5000]

Unknown keys are rejected so that typos do not silently fall back to
defaults.  ``to_dict`` followed by ``from_dict`` is the identity.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .. import distributions as d
from ..infinite_server import ScaledSystem
from ..region import MarkedRenewal

__all__ = ["ConfigError", "DistSpec", "SystemSpec", "ExperimentConfig", "load_config", "dump_config"]


class ConfigError(ValueError):
    pass


ARRIVAL_FAMILIES = {
    "exponential": (d.Exponential, ("rate",)),
    "gamma": (d.Gamma, ("shape", "rate")),
    "deterministic": (d.Deterministic, ("value",)),
    "shifted_exponential": (d.ShiftedExponential, ("shift", "rate")),
}

SERVICE_FAMILIES = {
    "lognormal": (d.Lognormal, ("mu", "sigma")),
    "exponential": (d.ExponentialMark, ("rate",)),
    "uniform": (d.UniformMark, ("upper",)),
    "deterministic": (d.PointMassMark, ("value",)),
    "discrete": (d.DiscreteMark, ("values", "probs")),
}


@dataclass(frozen=True)
class DistSpec:
    family: str
    params: dict = field(default_factory=dict)

    def build(self, table):
        if self.family not in table:
            raise ConfigError(f"unknown family {self.family!r}; choose from {sorted(table)}")
        cls, names = table[self.family]
        extra = set(self.params) - set(names)
        if extra:
            raise ConfigError(f"{self.family}: unexpected parameters {sorted(extra)}")
        kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in self.params.items()}
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{self.family}: {exc}") from exc

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params}

    @classmethod
    def from_dict(cls, raw) -> "DistSpec":
        if not isinstance(raw, dict) or "family" not in raw:
            raise ConfigError(f"distribution needs a 'family' key, got {raw!r}")
        raw = dict(raw)
        return cls(raw.pop("family"), raw)


@dataclass(frozen=True)
class SystemSpec:
    arrival: DistSpec = field(default_factory=lambda: DistSpec("exponential", {"rate": 1.0}))
    service: DistSpec = field(default_factory=lambda: DistSpec("lognormal", {"mu": -0.25, "sigma": 0.5}))
    lam: float = 1.0
    nu: float = 1.0
    alpha: float = 1.0
    epsilon_fraction: float | None = None

    def arrival_model(self):
        return self.arrival.build(ARRIVAL_FAMILIES)

    def service_model(self):
        return self.service.build(SERVICE_FAMILIES)

    def system(self, lam: float | None = None, nu: float | None = None) -> ScaledSystem:
        return ScaledSystem(
            self.arrival_model(),
            self.service_model(),
            self.lam if lam is None else lam,
            self.nu if nu is None else nu,
            self.epsilon_fraction,
        )

    def process(self) -> MarkedRenewal:
        """The marked renewal process with inter-arrivals ``X / lam`` and marks ``V / nu``."""
        sys_ = self.system()
        eps = None if self.epsilon_fraction is None else self.epsilon_fraction * sys_.interarrival.mean
        return MarkedRenewal(sys_.interarrival, sys_.marks, alpha=self.alpha, epsilon=eps)

    def to_dict(self) -> dict:
        return {
            "arrival": self.arrival.to_dict(),
            "service": self.service.to_dict(),
            "lam": self.lam,
            "nu": self.nu,
            "alpha": self.alpha,
            "epsilon_fraction": self.epsilon_fraction,
        }

    @classmethod
    def from_dict(cls, raw) -> "SystemSpec":
        raw = dict(raw or {})
        _reject_unknown(raw, {f.name for f in dataclasses.fields(cls)}, "system")
        out = {}
        for key in ("arrival", "service"):
            if key in raw:
                out[key] = DistSpec.from_dict(raw[key])
        for key in ("lam", "nu", "alpha"):
            if key in raw:
                out[key] = float(raw[key])
        if raw.get("epsilon_fraction") is not None:
            eps = float(raw["epsilon_fraction"])
            if not 0 < eps < 1:
                raise ConfigError("epsilon_fraction must lie in (0, 1)")
            out["epsilon_fraction"] = eps
        spec = cls(**out)
        if not (spec.lam > 0 and spec.nu > 0 and spec.alpha > 0):
            raise ConfigError("lam, nu and alpha must be positive")
        return spec


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs besides the code; runs are deterministic given it."""

    scenario: str = "default"
    system: SystemSpec = field(default_factory=SystemSpec)
    replications: int = 1000
    seed: int = 0
    out: str | None = None
    levels: dict = field(default_factory=lambda: {"test": 0.01})
    # region sampling
    direction: str = "backward"
    # bias benchmark
    horizons: list = field(default_factory=lambda: [600, 1000, 5000])
    targets: list = field(default_factory=lambda: [0.10, 0.05, 0.01])
    # batch-means comparison
    budgets: list = field(default_factory=lambda: [10000])
    batches: int = 30
    meta_replications: int = 1
    # sensitivity table
    grid: list = field(default_factory=lambda: [[1.0, 1.0]])
    # execution
    workers: int = 1

    @property
    def level(self) -> float:
        return float(self.levels.get("test", 0.01))

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.to_dict() if f.name == "system" else _copy(value)
        return out

    @classmethod
    def from_dict(cls, raw) -> "ExperimentConfig":
        raw = dict(raw or {})
        _reject_unknown(raw, {f.name for f in dataclasses.fields(cls)}, "config")
        kwargs = dict(raw)
        kwargs["system"] = SystemSpec.from_dict(raw.get("system"))
        for key in ("replications", "seed", "batches", "meta_replications", "workers"):
            if key in kwargs:
                kwargs[key] = _int(kwargs[key], key)
        if kwargs.get("replications", 1) < 1:
            raise ConfigError("replications must be >= 1")
        if kwargs.get("seed", 0) < 0:
            raise ConfigError("seed must be nonnegative")
        if kwargs.get("direction", "backward") not in ("backward", "forward", "both"):
            raise ConfigError("direction must be backward, forward or both")
        for key in ("horizons", "budgets"):
            if key in kwargs:
                kwargs[key] = [_int(v, key) for v in kwargs[key]]
        if "grid" in kwargs:
            kwargs["grid"] = [[float(a), float(b)] for a, b in kwargs["grid"]]
        return cls(**kwargs)


def _int(value, key):
    if isinstance(value, bool) or int(value) != value:
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(value)


def _copy(value):
    if isinstance(value, dict):
        return {k: _copy(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_copy(v) for v in value]
    return value


def _reject_unknown(raw, allowed, where):
    extra = set(raw) - allowed
    if extra:
        raise ConfigError(f"unknown {where} keys: {sorted(extra)}")


def load_config(path) -> ExperimentConfig:
    with Path(path).open() as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return ExperimentConfig.from_dict(raw)


def dump_config(config: ExperimentConfig, path=None) -> str:
    text = yaml.safe_dump(config.to_dict(), sort_keys=False)
    if path is not None:
        Path(path).write_text(text)
    return text
