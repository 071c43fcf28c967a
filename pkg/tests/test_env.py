import math

import numpy as np
import pytest

from delayed_bandits.delays import FixedDelay, GeometricDelay, PacketLossDelay, QueueDelay
from delayed_bandits.env import BanditInstance, DelayedBanditEnv


def test_instance_validation():
    with pytest.raises(ValueError):
        BanditInstance([0.5])
    with pytest.raises(ValueError):
        BanditInstance([0.5, 0.5])  # no unique optimum
    with pytest.raises(ValueError):
        BanditInstance([0.5, 1.2])


def test_instance_gaps():
    inst = BanditInstance([0.4, 0.45])
    assert inst.optimal_arm == 1
    assert inst.gaps == pytest.approx([0.05, 0.0])
    assert (inst.gaps == 0).sum() == 1


def test_zero_delay_reveals_same_round():
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), FixedDelay(0), seed=1)
    for t in range(1, 50):
        batch = env.step(1)
        assert len(batch) == 1
        arm, reward = batch[0]
        assert arm == 1 and reward in (0, 1)


def test_infinite_delay_never_delivered():
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), PacketLossDelay(0.0), seed=1)
    for _ in range(200):
        assert env.step(0) == []
    assert env.pending_count == 0
    assert env.dropped_count == 200


def test_fixed_delay_reveals_exactly_once_at_pull_plus_d():
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), FixedDelay(250), seed=3)
    batches = {}
    for t in range(1, 300):
        arm = 1 if t == 10 else 0
        batches[t] = env.step(arm)
    # the lone arm-1 pull at t=10 surfaces at t=260 and nowhere else
    arm1_reveals = [(t, item) for t, b in batches.items() for item in b if item[0] == 1]
    assert len(arm1_reveals) == 1
    assert arm1_reveals[0][0] == 260


def test_reset_determinism_and_seed_sensitivity():
    inst = BanditInstance([0.5, 0.3])
    actions = [t % 2 for t in range(500)]
    runs = {}
    for seed in (42, 42, 43):
        env = DelayedBanditEnv(inst, GeometricDelay(0.2), seed=seed)
        runs.setdefault(seed, []).append([env.step(a) for a in actions])
    assert runs[42][0] == runs[42][1]
    assert runs[42][0] != runs[43][0]


def test_fresh_env_has_empty_pending():
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), FixedDelay(5), seed=0)
    assert env.round == 1
    assert env.pending_count == 0
    assert np.all(env.queue_clocks == 0.0)


def test_conservation_and_no_duplication():
    T = 2000
    env = DelayedBanditEnv(
        BanditInstance([0.6, 0.3]), PacketLossDelay([0.5, 0.5]), seed=9
    )
    delivered = sum(len(env.step(t % 2)) for t in range(T))
    assert delivered + env.pending_count + env.dropped_count == T
    assert delivered == env.delivered_count


def test_every_finite_pull_delivered_exactly_once():
    T, d = 500, 7
    env = DelayedBanditEnv(BanditInstance([0.6, 0.3]), FixedDelay(d), seed=11)
    delivered = []
    for t in range(T):
        delivered.extend(env.step(0))
    assert len(delivered) == T - d  # last d pulls still pending
    assert env.pending_count == d


def test_reward_marginal_matches_mean():
    n = 100_000
    mu = 0.37
    env = DelayedBanditEnv(BanditInstance([mu, 0.9]), FixedDelay(0), seed=123)
    total = sum(env.step(0)[0][1] for _ in range(n))
    assert abs(total / n - mu) <= 4 * math.sqrt(mu * (1 - mu) / n)


class _ScriptedDelay(FixedDelay):
    """Returns a prescribed delay per call (for reveal-collision tests)."""

    def __init__(self, script):
        super().__init__(0)
        self._script = iter(script)

    def sample(self, arm, rng, pull_round=0, queue_clocks=None):
        return next(self._script)


def test_batch_sorted_by_pull_round_then_arm():
    # pulls at rounds 1, 2, 3 (arms 2, 1, 0) all reveal together at round 3
    env = DelayedBanditEnv(
        BanditInstance([0.5, 0.4, 0.3]), _ScriptedDelay([2, 1, 0]), seed=5
    )
    assert env.step(2) == []
    assert env.step(1) == []
    batch = env.step(0)
    assert [arm for arm, _ in batch] == [2, 1, 0]  # pull order, not arm order


def test_simultaneous_reveals_ordered_deterministically():
    from delayed_bandits.delays import UniformDelay

    inst = BanditInstance([0.5, 0.4, 0.3])
    for seed in range(5):
        env = DelayedBanditEnv(inst, UniformDelay(0, 4), seed=seed)
        batches = [env.step(t % 3) for t in range(60)]
        env2 = DelayedBanditEnv(inst, UniformDelay(0, 4), seed=seed)
        assert batches == [env2.step(t % 3) for t in range(60)]


def test_invalid_arm_rejected():
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), FixedDelay(0), seed=0)
    with pytest.raises(ValueError):
        env.step(2)
    with pytest.raises(ValueError):
        env.step(-1)


def test_queue_env_zero_delay_when_idle():
    # high service rate: queue almost always clears within the round
    env = DelayedBanditEnv(BanditInstance([0.5, 0.3]), QueueDelay(50.0), seed=2)
    immediate = sum(bool(env.step(0)) for _ in range(100))
    assert immediate > 90


def test_delay_model_arm_count_mismatch_rejected():
    with pytest.raises(ValueError):
        DelayedBanditEnv(
            BanditInstance([0.5, 0.3]), PacketLossDelay([0.5, 0.5, 0.5]), seed=0
        )
