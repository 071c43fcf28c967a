"""Tour of the six delay families: samples, quantiles, tail behavior.

Every family lives on the non-negative integers plus infinity. The
i.i.d. families expose an exact quantile d(q) = inf{d : P[delay <= d] >= q};
the regret bounds consume delays only through these quantiles.
"""

import numpy as np

from delayed_bandits import (
    FixedDelay,
    GeometricDelay,
    PacketLossDelay,
    ParetoDelay,
    QueueDelay,
    UniformDelay,
)

rng = np.random.default_rng(0)

print("family            5 samples                      d(0.5)   d(0.9)")
for model in [
    FixedDelay(250),
    GeometricDelay(0.01),
    UniformDelay(150, 300),
    ParetoDelay(1.0),
    PacketLossDelay(0.7),
]:
    samples = [model.sample(0, rng) for _ in range(5)]
    q50, q90 = model.quantile(0, 0.5), model.quantile(0, 0.9)
    print(f"{model.family:<14} {str(samples):<35} {q50!s:>6} {q90!s:>8}")

# Heavy tails: with a tail exponent at or below 1 the mean delay is
# infinite, so the running average never settles.
pareto = ParetoDelay(0.5)
for n in (1_000, 100_000, 1_000_000):
    mean = pareto.sample_batch(0, n, np.random.default_rng(1)).mean()
    print(f"pareto(0.5) running mean over {n:>9,} draws: {mean:,.0f}")

# The queue-based family is not i.i.d.: each arm has a FIFO queue with
# exponential service, so delays depend on how often the arm was pulled.
queue = QueueDelay(0.1)  # mean service time 10 rounds
clocks = np.zeros(1)
delays = [queue.sample(0, rng, pull_round=t, queue_clocks=clocks) for t in range(1, 11)]
print(f"\nqueue, 10 back-to-back pulls of one arm: delays {delays}")
print("(each pull waits for every earlier pull of the same arm to clear)")
