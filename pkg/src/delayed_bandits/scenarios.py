"""Built-in experiment scenarios, one per delay family.

The registry mirrors the standard benchmark setups: a fixed 250-round
delay, heavy-tailed Pareto delays on a hard two-arm instance (with the
optimal arm's tail exponent swept over 0.2/0.5/0.8), packet loss with
per-replication loss probabilities, geometric delays with mean 99,
uniform-integer delays on [150, 300], and the non-i.i.d. queue-based
mechanism. Horizons, arm counts, and replication counts follow the same
sources; override them from the CLI for desk-scale runs.
"""

from __future__ import annotations

from .config import ScenarioConfig

__all__ = ["DEFAULT_SEED", "scenario_registry", "get_scenario"]

DEFAULT_SEED = 42

_ALL_POLICIES = ("ts", "se", "ducb1")


def scenario_registry() -> dict[str, ScenarioConfig]:
    """Named built-in scenarios."""
    uniform_means = {"uniform": [0.25, 0.75]}
    scenarios = [
        ScenarioConfig(
            name="fixed",
            arms=20,
            means=uniform_means,
            delay={"family": "fixed", "value": 250},
            horizon=20_000,
            replications=100,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
        ScenarioConfig(
            name="pareto",
            arms=2,
            means=[0.4, 0.45],  # the second arm is optimal
            delay={"family": "pareto", "alpha": [1.0, 0.5]},
            horizon=3_000,
            replications=300,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
        ScenarioConfig(
            name="packet_loss",
            arms=20,
            means=uniform_means,
            delay={"family": "packet_loss", "p": {"uniform": [0.0, 1.0]}},
            horizon=10_000,
            replications=200,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
        ScenarioConfig(
            name="geometric",
            arms=3,
            means=[0.5, 0.4, 0.3],
            delay={"family": "geometric", "p": 0.01},
            horizon=10_000,
            replications=200,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
        ScenarioConfig(
            name="uniform",
            arms=20,
            means=uniform_means,
            delay={"family": "uniform", "low": 150, "high": 300},
            horizon=20_000,
            replications=100,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
        ScenarioConfig(
            name="queue",
            arms=5,
            means=uniform_means,
            delay={"family": "queue", "service_rate": 0.1},
            horizon=10_000,
            replications=200,
            policies=_ALL_POLICIES,
            seed=DEFAULT_SEED,
        ),
    ]
    # Tail-exponent sweep for the optimal arm of the Pareto instance.
    base = scenarios[1]
    for alpha2 in (0.2, 0.8):
        scenarios.append(
            base.replace(
                name=f"pareto_a{int(alpha2 * 10):02d}",
                delay={"family": "pareto", "alpha": [1.0, alpha2]},
            )
        )
    return {s.name: s for s in scenarios}


def get_scenario(name: str) -> ScenarioConfig:
    """Look up one built-in scenario by name."""
    registry = scenario_registry()
    if name not in registry:
        raise KeyError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(registry))}"
        )
    return registry[name]
