"""Delay-agnostic bandit policies behind a single select/observe interface.

Every policy sees only the (arm, reward) pairs revealed so far: no delay
values, no pull timestamps, no true means. Each policy owns a Generator and
consumes it in a fixed order per round, so a run is reproducible from the
policy seed alone.
"""

from __future__ import annotations

import math

import numpy as np

from .env import FeedbackBatch

__all__ = [
    "Policy",
    "ThompsonSampling",
    "DelayedUCB1",
    "SuccessiveElimination",
    "POLICY_NAMES",
    "make_policy",
    "argmax_random_tie",
]


def argmax_random_tie(values: np.ndarray, rng: np.random.Generator) -> int:
    """Index of the maximum, ties broken uniformly at random.

    The generator is consumed only when there is an actual tie, so
    continuous-valued indices (almost surely tie-free) leave the stream
    untouched.
    """
    best = np.flatnonzero(values == values.max())
    if len(best) == 1:
        return int(best[0])
    return int(best[rng.integers(len(best))])


class Policy:
    """Interface: ``select`` an arm for round t, ``observe`` revealed pairs."""

    name: str = ""

    def __init__(self, n_arms: int, rng: np.random.Generator):
        if n_arms < 2:
            raise ValueError("need at least 2 arms")
        self.n_arms = n_arms
        self.rng = rng

    def select(self, t: int) -> int:
        raise NotImplementedError

    def observe(self, batch: FeedbackBatch) -> None:
        raise NotImplementedError

    def total_observed(self) -> int:
        """Number of reveals ingested so far (count-consistency hook)."""
        raise NotImplementedError


class ThompsonSampling(Policy):
    """Beta-Bernoulli posterior sampling, updated whenever rewards surface.

    Per-arm success/failure counters start at zero (uniform prior). Each
    round draws one posterior sample per arm, in arm order, and plays the
    argmax. Arms whose feedback is still in flight simply keep their prior.
    """

    name = "ts"

    def __init__(self, n_arms, rng):
        super().__init__(n_arms, rng)
        self.successes = np.zeros(n_arms, dtype=np.int64)
        self.failures = np.zeros(n_arms, dtype=np.int64)

    def select(self, t: int) -> int:
        theta = self.rng.beta(self.successes + 1, self.failures + 1)
        return argmax_random_tie(theta, self.rng)

    def observe(self, batch: FeedbackBatch) -> None:
        for arm, reward in batch:
            if reward not in (0, 1):
                raise ValueError(f"rewards must be binary, got {reward!r}")
            self.successes[arm] += reward
            self.failures[arm] += 1 - reward

    def total_observed(self) -> int:
        return int(self.successes.sum() + self.failures.sum())


class DelayedUCB1(Policy):
    """UCB1 run on observed rewards only, with random tie-breaking.

    Index for arm i: observed mean + sqrt(2 ln t / n_i), with t the global
    round (not the observation count) and n_i the rewards seen for arm i.
    Unobserved arms get an infinite index, so the first rounds are uniform.
    """

    name = "ducb1"

    def __init__(self, n_arms, rng):
        super().__init__(n_arms, rng)
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.sums = np.zeros(n_arms, dtype=np.float64)

    def select(self, t: int) -> int:
        if t < 1:
            raise ValueError("rounds are 1-based")
        with np.errstate(divide="ignore", invalid="ignore"):
            index = self.sums / self.counts + np.sqrt(2.0 * math.log(t) / self.counts)
        index[self.counts == 0] = np.inf
        return argmax_random_tie(index, self.rng)

    def observe(self, batch: FeedbackBatch) -> None:
        for arm, reward in batch:
            self.counts[arm] += 1
            self.sums[arm] += reward

    def total_observed(self) -> int:
        return int(self.counts.sum())


class SuccessiveElimination(Policy):
    """Round-robin sweeps over an active set with end-of-sweep elimination.

    Each sweep pulls every active arm once. Feedback is ingested as it
    arrives, but confidence intervals are recomputed only when a sweep
    completes: mean +- sqrt(2 / max(n_i, 1)), no log factor, unclipped.
    An arm is dropped once its upper bound falls below some arm's lower
    bound; dropped arms never return, and the set can never empty because
    the best lower bound's own arm always survives. Reveals for already
    eliminated arms still update counts; they just can't matter.
    """

    name = "se"

    def __init__(self, n_arms, rng):
        super().__init__(n_arms, rng)
        self.active = list(range(n_arms))
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.sums = np.zeros(n_arms, dtype=np.float64)
        self._cursor = 0

    def select(self, t: int) -> int:
        if self._cursor >= len(self.active):
            self._eliminate()
            self._cursor = 0
        arm = self.active[self._cursor]
        self._cursor += 1
        return arm

    def observe(self, batch: FeedbackBatch) -> None:
        for arm, reward in batch:
            self.counts[arm] += 1
            self.sums[arm] += reward

    def _eliminate(self) -> None:
        active = np.asarray(self.active)
        n = np.maximum(self.counts[active], 1)
        means = self.sums[active] / n
        radius = np.sqrt(2.0 / n)
        lcb = means - radius
        ucb = means + radius
        keep = ucb >= lcb.max()
        self.active = [int(a) for a in active[keep]]

    def total_observed(self) -> int:
        return int(self.counts.sum())


POLICY_NAMES = ("ts", "se", "ducb1")

_POLICIES = {
    "ts": ThompsonSampling,
    "se": SuccessiveElimination,
    "ducb1": DelayedUCB1,
}


def make_policy(name: str, n_arms: int, rng: np.random.Generator) -> Policy:
    """Instantiate a policy by its registry name ("ts", "se", "ducb1")."""
    if name not in _POLICIES:
        raise ValueError(f"unknown policy {name!r}; expected one of {sorted(_POLICIES)}")
    return _POLICIES[name](n_arms, rng)
