"""Scenario configuration: schema, JSON loading, and materialization.

A scenario is a JSON-compatible mapping with exactly these keys (``out``
optional):

    name, arms, means, delay, horizon, replications, policies, seed, out

``means`` is either an explicit list of arm means or ``{"uniform": [lo, hi]}``
for per-replication sampling. Delay parameters that are per-arm (``alpha``,
``p``) may likewise be ``{"uniform": [lo, hi]}`` to sample one value per arm
per replication. Unknown keys anywhere are rejected.

Materialization draws from the replication's instance stream in a fixed
order: arm means first, then delay parameters.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .delays import DelayModel, delay_model_from_config
from .policies import POLICY_NAMES

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "load_scenario_file",
    "scenario_from_dict",
    "materialize_means",
    "materialize_delay",
]


class ConfigError(ValueError):
    """A scenario or delay configuration is malformed."""


_SAMPLED = "uniform"  # the only sampling spec keyword


def _is_sampling_spec(value: Any) -> bool:
    return isinstance(value, Mapping)


def _check_sampling_spec(value: Mapping, what: str, lo_ok: float, hi_ok: float) -> None:
    if set(value) != {_SAMPLED}:
        raise ConfigError(f"{what}: sampling spec must be {{'uniform': [lo, hi]}}")
    rng = value[_SAMPLED]
    if (
        not isinstance(rng, Sequence)
        or len(rng) != 2
        or not all(isinstance(x, (int, float)) for x in rng)
    ):
        raise ConfigError(f"{what}: 'uniform' takes a [lo, hi] pair")
    lo, hi = float(rng[0]), float(rng[1])
    if not lo_ok <= lo <= hi <= hi_ok:
        raise ConfigError(
            f"{what}: need {lo_ok} <= lo <= hi <= {hi_ok}, got [{lo}, {hi}]"
        )


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment: instance generation, delay model, horizon, policies."""

    name: str
    arms: int
    means: Any  # explicit sequence or {"uniform": [lo, hi]}
    delay: Mapping[str, Any]
    horizon: int
    replications: int
    policies: tuple[str, ...]
    seed: int
    out: str | None = None

    def __post_init__(self):
        if self.arms < 2:
            raise ConfigError("a scenario needs at least 2 arms")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least 1")
        if self.replications < 1:
            raise ConfigError("need at least 1 replication")
        if not self.policies:
            raise ConfigError("need at least one policy")
        for p in self.policies:
            if p not in POLICY_NAMES:
                raise ConfigError(
                    f"unknown policy {p!r}; expected one of {sorted(POLICY_NAMES)}"
                )
        if _is_sampling_spec(self.means):
            _check_sampling_spec(self.means, "means", 0.0, 1.0)
        else:
            if len(self.means) != self.arms:
                raise ConfigError(
                    f"got {len(self.means)} means for {self.arms} arms"
                )
            if any(not 0.0 <= float(m) <= 1.0 for m in self.means):
                raise ConfigError("arm means must lie in [0, 1]")
        self._validate_delay()

    def _validate_delay(self) -> None:
        # Structural check now; numeric validation happens at materialization.
        cfg = dict(self.delay)
        sampled = {}
        for key, value in list(cfg.items()):
            if key != "family" and _is_sampling_spec(value):
                _check_sampling_spec(value, f"delay.{key}", -np.inf, np.inf)
                sampled[key] = value
                cfg[key] = 0.5  # placeholder for the structural pass
        if sampled and cfg.get("family") not in ("packet_loss", "pareto"):
            raise ConfigError(
                "per-replication sampling is only supported for per-arm delay "
                "parameters (packet_loss p, pareto alpha)"
            )
        try:
            delay_model_from_config(cfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "arms": self.arms,
            "means": list(self.means) if not _is_sampling_spec(self.means) else dict(self.means),
            "delay": dict(self.delay),
            "horizon": self.horizon,
            "replications": self.replications,
            "policies": list(self.policies),
            "seed": self.seed,
        }
        if self.out is not None:
            d["out"] = self.out
        return d


_REQUIRED_KEYS = {"name", "arms", "means", "delay", "horizon", "replications", "policies", "seed"}
_OPTIONAL_KEYS = {"out"}


def scenario_from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    """Validate a raw mapping and build a ScenarioConfig. Unknown keys fail."""
    keys = set(data)
    unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - keys
    if missing:
        raise ConfigError(f"missing scenario keys: {sorted(missing)}")
    if not isinstance(data["delay"], Mapping):
        raise ConfigError("'delay' must be a mapping with a 'family' key")
    try:
        return ScenarioConfig(
            name=str(data["name"]),
            arms=int(data["arms"]),
            means=data["means"],
            delay=dict(data["delay"]),
            horizon=int(data["horizon"]),
            replications=int(data["replications"]),
            policies=tuple(data["policies"]),
            seed=int(data["seed"]),
            out=data.get("out"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_scenario_file(path: str) -> ScenarioConfig:
    """Load a scenario from a JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ConfigError(f"scenario file {path} must hold a JSON object")
    return scenario_from_dict(data)


def materialize_means(config: ScenarioConfig, rng: np.random.Generator) -> tuple[float, ...]:
    """Resolve the mean spec to concrete per-arm means (sampling if needed)."""
    if _is_sampling_spec(config.means):
        lo, hi = config.means[_SAMPLED]
        return tuple(float(m) for m in rng.uniform(lo, hi, config.arms))
    return tuple(float(m) for m in config.means)


def materialize_delay(
    config: ScenarioConfig, rng: np.random.Generator
) -> tuple[DelayModel, dict]:
    """Resolve the delay spec to a concrete model plus its realized config.

    Per-arm sampling specs draw one parameter per arm from the given
    uniform range; everything else passes through unchanged.
    """
    realized = dict(config.delay)
    for key, value in list(realized.items()):
        if key != "family" and _is_sampling_spec(value):
            lo, hi = value[_SAMPLED]
            realized[key] = [float(x) for x in rng.uniform(lo, hi, config.arms)]
    try:
        model = delay_model_from_config(realized)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return model, realized
