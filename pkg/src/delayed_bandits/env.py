"""Round-by-round delayed-feedback bandit environment.

The protocol per round t: the agent picks an arm, the environment draws a
Bernoulli reward and a delay l, schedules the (arm, reward) pair to surface
at round t + l, and hands back the batch of everything scheduled for round
t itself. The batch carries only (arm, reward) pairs: no pull times, no
delay values. A delay of 0 means the pair is in the current round's batch,
so it is visible before the next selection; an infinite delay means the
pair is dropped and never delivered.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .delays import DelayModel

FeedbackBatch = list[tuple[int, int]]
"""Revealed (arm, reward) pairs for one round, ordered by (pull round, arm)."""


@dataclass(frozen=True)
class BanditInstance:
    """Ground-truth arm means, hidden from every policy.

    Requires at least two arms and a unique best arm (so gaps are zero for
    exactly one index).
    """

    means: tuple[float, ...]

    def __init__(self, means):
        object.__setattr__(self, "means", tuple(float(m) for m in means))
        if len(self.means) < 2:
            raise ValueError("a bandit instance needs at least 2 arms")
        if any(not 0.0 <= m <= 1.0 for m in self.means):
            raise ValueError("arm means must lie in [0, 1]")
        best = max(self.means)
        if sum(1 for m in self.means if m == best) != 1:
            raise ValueError("the optimal arm must be unique")

    @property
    def n_arms(self) -> int:
        return len(self.means)

    @property
    def optimal_arm(self) -> int:
        return int(np.argmax(self.means))

    @property
    def gaps(self) -> np.ndarray:
        """Per-arm shortfall versus the best mean (zero only at the optimum)."""
        return np.max(self.means) - np.asarray(self.means)


class PendingReveal(NamedTuple):
    """A scheduled reveal; heap order (reveal, pull, arm) fixes batch order."""

    reveal_round: int
    pull_round: int
    arm: int
    reward: int


@dataclass
class DelayedBanditEnv:
    """Owns the hidden reward/delay sampling and the reveal scheduler.

    Reward and delay draws come from two independent substreams derived
    from ``seed``, so the reward stream an action sequence sees does not
    depend on how many delay draws the model consumes. Identical seed and
    action sequence reproduce the exact reveal schedule. One instance is
    confined to a single replication; it holds no global state.
    """

    instance: BanditInstance
    delays: DelayModel
    seed: int | np.random.SeedSequence

    round: int = field(init=False)
    pending_count: int = field(init=False)
    delivered_count: int = field(init=False)
    dropped_count: int = field(init=False)

    def __post_init__(self):
        n = self.delays.arm_count()
        if n is not None and n != self.instance.n_arms:
            raise ValueError(
                f"delay model is parametrized for {n} arms, instance has {self.instance.n_arms}"
            )
        ss = (
            self.seed
            if isinstance(self.seed, np.random.SeedSequence)
            else np.random.SeedSequence(self.seed)
        )
        reward_ss, delay_ss = ss.spawn(2)
        self._reward_rng = np.random.default_rng(reward_ss)
        self._delay_rng = np.random.default_rng(delay_ss)
        self._pending: list[PendingReveal] = []
        self.queue_clocks = np.zeros(self.instance.n_arms)
        self.round = 1
        self.pending_count = 0
        self.delivered_count = 0
        self.dropped_count = 0

    def step(self, action: int) -> FeedbackBatch:
        """Pull ``action``, schedule its reveal, return this round's batch."""
        if not 0 <= action < self.instance.n_arms:
            raise ValueError(
                f"arm index {action} out of range [0, {self.instance.n_arms})"
            )
        t = self.round
        reward = int(self._reward_rng.random() < self.instance.means[action])
        delay = self.delays.sample(
            action, self._delay_rng, pull_round=t, queue_clocks=self.queue_clocks
        )
        if math.isinf(delay):
            self.dropped_count += 1
        else:
            heapq.heappush(
                self._pending, PendingReveal(t + int(delay), t, action, reward)
            )
            self.pending_count += 1

        batch: FeedbackBatch = []
        while self._pending and self._pending[0].reveal_round == t:
            item = heapq.heappop(self._pending)
            batch.append((item.arm, item.reward))
        self.pending_count -= len(batch)
        self.delivered_count += len(batch)
        self.round = t + 1
        return batch
