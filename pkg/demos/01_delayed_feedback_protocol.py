"""Walk the delayed-feedback protocol one round at a time.

The agent picks an arm; the environment draws a Bernoulli reward and a
delay, and the (arm, reward) pair only surfaces once the delay elapses.
The batch handed back each round carries no timestamps and no delay
values, so a policy can never tell a fresh reward from a stale one.
"""

from delayed_bandits import BanditInstance, DelayedBanditEnv, FixedDelay, PacketLossDelay

# Two arms, the first clearly better. With a fixed delay of 3 rounds,
# nothing comes back until round 4.
instance = BanditInstance([0.8, 0.3])
env = DelayedBanditEnv(instance, FixedDelay(3), seed=1)

print("fixed delay 3: pulls alternate arms, feedback trails by 3 rounds")
for t in range(1, 9):
    arm = (t - 1) % 2
    batch = env.step(arm)
    print(f"  round {t}: pulled arm {arm}, revealed {batch}")

print(f"  still pending at the end: {env.pending_count}")

# Packet loss: each pull is revealed immediately with probability p and
# never otherwise. With p = 0.5 about half of the pulls vanish.
env = DelayedBanditEnv(instance, PacketLossDelay(0.5), seed=2)
revealed = sum(len(env.step(0)) for _ in range(1000))
print(f"\npacket loss p=0.5: {revealed}/1000 pulls ever revealed, "
      f"{env.dropped_count} lost forever")

# Determinism: the same seed and action sequence replay bit-identically.
a = [DelayedBanditEnv(instance, FixedDelay(2), seed=7).step(0) for _ in range(5)]
b = [DelayedBanditEnv(instance, FixedDelay(2), seed=7).step(0) for _ in range(5)]
print(f"\nsame seed, same actions, same reveals: {a == b}")
