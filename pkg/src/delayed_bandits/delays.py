"""Delay distributions for the delayed-feedback bandit environment.

Six families are provided. Five are i.i.d. (fixed, Pareto-tailed, packet
loss, geometric, uniform-integer); the sixth routes each pull through a
per-arm FIFO queue with exponential service times and is therefore not
i.i.d. All samples live in the non-negative integers plus ``math.inf``,
the sentinel for feedback that never arrives.

Each i.i.d. family also exposes its exact quantile function
``quantile(arm, q) = inf{d : P[delay <= d] >= q}``, which is what the
regret-bound evaluators consume.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

Delay = Union[int, float]  # non-negative int, or math.inf

__all__ = [
    "Delay",
    "DelayModel",
    "FixedDelay",
    "ParetoDelay",
    "PacketLossDelay",
    "GeometricDelay",
    "UniformDelay",
    "QueueDelay",
    "UnsupportedFamilyError",
    "delay_model_from_config",
]


class UnsupportedFamilyError(ValueError):
    """Raised when an operation needs a stationary marginal the family lacks."""


def _per_arm(values: float | Sequence[float], name: str) -> np.ndarray:
    """Normalize a scalar-or-vector parameter to a 1-d float array.

    A length-1 array means "shared by every arm"; longer arrays are indexed
    by arm.
    """
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a scalar or a 1-d sequence")
    return arr


class DelayModel:
    """Base class: a sampler plus (for i.i.d. families) an exact quantile."""

    family: str = ""
    is_iid: bool = True

    def arm_count(self) -> int | None:
        """Number of arms the parameters pin down, or None if shared."""
        return None

    def sample(
        self,
        arm: int,
        rng: np.random.Generator,
        pull_round: int = 0,
        queue_clocks: np.ndarray | None = None,
    ) -> Delay:
        """Draw one delay for a pull of ``arm`` at ``pull_round``."""
        raise NotImplementedError

    def sample_batch(
        self, arm: int, size: int | tuple[int, ...], rng: np.random.Generator
    ) -> np.ndarray:
        """Draw ``size`` i.i.d. delays for ``arm`` as a float array (inf allowed)."""
        raise UnsupportedFamilyError(
            f"{self.family} delays are not i.i.d.; batch sampling is undefined"
        )

    def quantile(self, arm: int, q: float) -> Delay:
        """Smallest d with P[delay <= d] >= q, or inf if no finite d qualifies."""
        raise UnsupportedFamilyError(
            f"{self.family} delays have no stationary marginal; quantiles are undefined"
        )

    def to_config(self) -> dict:
        raise NotImplementedError

    def _check_q(self, q: float) -> None:
        if not 0.0 < q <= 1.0:
            raise ValueError(f"quantile level must be in (0, 1], got {q}")


class FixedDelay(DelayModel):
    """Every reward is revealed exactly ``value`` rounds after the pull."""

    family = "fixed"

    def __init__(self, value: int):
        if value < 0 or int(value) != value:
            raise ValueError(f"fixed delay must be a non-negative integer, got {value}")
        self.value = int(value)

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        return self.value

    def sample_batch(self, arm, size, rng) -> np.ndarray:
        return np.full(size, float(self.value))

    def quantile(self, arm, q) -> Delay:
        self._check_q(q)
        return self.value

    def to_config(self) -> dict:
        return {"family": "fixed", "value": self.value}


class ParetoDelay(DelayModel):
    """Heavy-tailed delays: ceil(U^(-1/alpha)) - 1 with U uniform on (0, 1).

    The underlying continuous variable has survival x^-alpha on [1, inf),
    so P[delay <= d] = 1 - (d + 1)^-alpha. Alpha <= 1 gives an infinite
    mean. ``alpha`` may be a scalar or one value per arm.
    """

    family = "pareto"

    def __init__(self, alpha: float | Sequence[float]):
        self.alpha = _per_arm(alpha, "alpha")
        if np.any(self.alpha <= 0):
            raise ValueError("pareto tail exponents must be positive")

    def arm_count(self) -> int | None:
        return None if self.alpha.size == 1 else int(self.alpha.size)

    def _alpha(self, arm: int) -> float:
        return float(self.alpha[0] if self.alpha.size == 1 else self.alpha[arm])

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        u = rng.random()
        while u == 0.0:  # avoid the measure-zero division blow-up
            u = rng.random()
        return int(math.ceil(u ** (-1.0 / self._alpha(arm)))) - 1

    def sample_batch(self, arm, size, rng) -> np.ndarray:
        u = rng.random(size)
        u[u == 0.0] = 0.5
        return np.ceil(u ** (-1.0 / self._alpha(arm))) - 1.0

    def quantile(self, arm, q) -> Delay:
        self._check_q(q)
        if q == 1.0:
            return math.inf  # CDF approaches but never reaches 1
        a = self._alpha(arm)
        cdf = lambda d: 1.0 - (d + 1.0) ** (-a)
        d = max(0, math.ceil((1.0 - q) ** (-1.0 / a)) - 1)
        while d > 0 and cdf(d - 1) >= q:
            d -= 1
        while cdf(d) < q:
            d += 1
        return d

    def to_config(self) -> dict:
        alpha = self.alpha.tolist()
        return {"family": "pareto", "alpha": alpha[0] if len(alpha) == 1 else alpha}


class PacketLossDelay(DelayModel):
    """Feedback arrives immediately with probability p, never otherwise.

    ``p`` may be a scalar or one value per arm.
    """

    family = "packet_loss"

    def __init__(self, p: float | Sequence[float]):
        self.p = _per_arm(p, "p")
        if np.any((self.p < 0) | (self.p > 1)):
            raise ValueError("packet-loss probabilities must lie in [0, 1]")

    def arm_count(self) -> int | None:
        return None if self.p.size == 1 else int(self.p.size)

    def _p(self, arm: int) -> float:
        return float(self.p[0] if self.p.size == 1 else self.p[arm])

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        return 0 if rng.random() < self._p(arm) else math.inf

    def sample_batch(self, arm, size, rng) -> np.ndarray:
        return np.where(rng.random(size) < self._p(arm), 0.0, np.inf)

    def quantile(self, arm, q) -> Delay:
        self._check_q(q)
        return 0 if q <= self._p(arm) else math.inf

    def to_config(self) -> dict:
        p = self.p.tolist()
        return {"family": "packet_loss", "p": p[0] if len(p) == 1 else p}


class GeometricDelay(DelayModel):
    """Number of failures before the first success: P[delay = k] = (1-p)^k p.

    Delay 0 occurs with probability p, so feedback can be immediate. The
    success probability is shared by all arms.
    """

    family = "geometric"

    def __init__(self, p: float):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"geometric success probability must be in (0, 1], got {p}")
        self.p = float(p)

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        # numpy's geometric counts trials (support 1, 2, ...); shift to failures
        return int(rng.geometric(self.p)) - 1

    def sample_batch(self, arm, size, rng) -> np.ndarray:
        return rng.geometric(self.p, size).astype(float) - 1.0

    def quantile(self, arm, q) -> Delay:
        self._check_q(q)
        if self.p == 1.0:
            return 0
        if q == 1.0:
            return math.inf
        cdf = lambda d: 1.0 - (1.0 - self.p) ** (d + 1.0)
        d = max(0, math.ceil(math.log1p(-q) / math.log1p(-self.p) - 1.0))
        while d > 0 and cdf(d - 1) >= q:
            d -= 1
        while cdf(d) < q:
            d += 1
        return d

    def to_config(self) -> dict:
        return {"family": "geometric", "p": self.p}


class UniformDelay(DelayModel):
    """Delay uniform over the integers in [low, high], shared by all arms."""

    family = "uniform"

    def __init__(self, low: int, high: int):
        if int(low) != low or int(high) != high:
            raise ValueError("uniform delay endpoints must be integers")
        if not 0 <= low <= high:
            raise ValueError(f"need 0 <= low <= high, got [{low}, {high}]")
        self.low = int(low)
        self.high = int(high)

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        return int(rng.integers(self.low, self.high + 1))

    def sample_batch(self, arm, size, rng) -> np.ndarray:
        return rng.integers(self.low, self.high + 1, size).astype(float)

    def quantile(self, arm, q) -> Delay:
        self._check_q(q)
        n = self.high - self.low + 1
        d = self.low + math.ceil(q * n) - 1
        while d > self.low and (d - self.low) / n >= q:
            d -= 1
        while (d - self.low + 1) / n < q:
            d += 1
        return d

    def to_config(self) -> dict:
        return {"family": "uniform", "low": self.low, "high": self.high}


class QueueDelay(DelayModel):
    """Per-arm FIFO queue with exponential service times (not i.i.d.).

    A pull joins its arm's queue; its reward is revealed once every earlier
    pull of that arm has been served. Service runs in continuous time at
    ``service_rate``; a completion inside the pull's own round means delay 0
    (an idle queue reveals immediately). Completion times are tracked in
    ``queue_clocks``, owned by the environment state.
    """

    family = "queue"
    is_iid = False

    def __init__(self, service_rate: float):
        if service_rate <= 0:
            raise ValueError(f"service rate must be positive, got {service_rate}")
        self.service_rate = float(service_rate)

    def sample(self, arm, rng, pull_round=0, queue_clocks=None) -> Delay:
        if queue_clocks is None:
            raise ValueError("queue-based delays need the environment's queue clocks")
        start = max(float(queue_clocks[arm]), float(pull_round))
        done = start + rng.exponential(1.0 / self.service_rate)
        queue_clocks[arm] = done
        # A completion in (t, t+1] is revealed in round t's batch.
        return max(0, int(math.ceil(done)) - 1 - pull_round)

    def to_config(self) -> dict:
        return {"family": "queue", "service_rate": self.service_rate}


_FAMILIES = {
    "fixed": (FixedDelay, {"value"}),
    "pareto": (ParetoDelay, {"alpha"}),
    "packet_loss": (PacketLossDelay, {"p"}),
    "geometric": (GeometricDelay, {"p"}),
    "uniform": (UniformDelay, {"low", "high"}),
    "queue": (QueueDelay, {"service_rate"}),
}


def delay_model_from_config(config: dict) -> DelayModel:
    """Build a delay model from its config dict ({"family": ..., <params>}).

    Unknown families and unknown or missing parameter keys are rejected.
    """
    if "family" not in config:
        raise ValueError("delay config needs a 'family' key")
    family = config["family"]
    if family not in _FAMILIES:
        raise ValueError(
            f"unknown delay family {family!r}; expected one of {sorted(_FAMILIES)}"
        )
    cls, params = _FAMILIES[family]
    given = set(config) - {"family"}
    if given != params:
        raise ValueError(
            f"delay family {family!r} takes parameters {sorted(params)}, got {sorted(given)}"
        )
    return cls(**{k: config[k] for k in params})
