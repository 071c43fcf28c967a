import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def run_loop(policy, env, horizon):
    """Drive the select/step/observe protocol; return the action sequence."""
    actions = []
    for t in range(1, horizon + 1):
        arm = policy.select(t)
        batch = env.step(arm)
        policy.observe(batch)
        actions.append(arm)
    return actions
