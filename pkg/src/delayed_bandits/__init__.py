"""Stochastic multi-armed bandits with delayed feedback.

A deterministic simulation framework: a delayed-reveal environment, six
delay families, three delay-agnostic policies (Thompson sampling,
successive elimination, delayed UCB1), numeric regret-bound evaluators,
and a seeded replication harness with CSV output.
"""

from .bounds import (
    BoundInput,
    BoundValue,
    check_reveal_concentration,
    kl_bernoulli,
    minimize_bound,
    se_bound,
    ts_multi_arm_bound,
    ts_two_arm_bound,
)
from .config import ConfigError, ScenarioConfig, load_scenario_file, scenario_from_dict
from .delays import (
    DelayModel,
    FixedDelay,
    GeometricDelay,
    PacketLossDelay,
    ParetoDelay,
    QueueDelay,
    UniformDelay,
    UnsupportedFamilyError,
    delay_model_from_config,
)
from .env import BanditInstance, DelayedBanditEnv, FeedbackBatch, PendingReveal
from .harness import AggregateResult, RunResult, run_replication, run_scenario
from .policies import (
    DelayedUCB1,
    Policy,
    SuccessiveElimination,
    ThompsonSampling,
    make_policy,
)
from .scenarios import get_scenario, scenario_registry

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "BanditInstance",
    "BoundInput",
    "BoundValue",
    "ConfigError",
    "DelayModel",
    "DelayedBanditEnv",
    "DelayedUCB1",
    "FeedbackBatch",
    "FixedDelay",
    "GeometricDelay",
    "PacketLossDelay",
    "ParetoDelay",
    "PendingReveal",
    "Policy",
    "QueueDelay",
    "RunResult",
    "ScenarioConfig",
    "SuccessiveElimination",
    "ThompsonSampling",
    "UniformDelay",
    "UnsupportedFamilyError",
    "check_reveal_concentration",
    "delay_model_from_config",
    "get_scenario",
    "kl_bernoulli",
    "load_scenario_file",
    "make_policy",
    "minimize_bound",
    "run_replication",
    "run_scenario",
    "scenario_from_dict",
    "scenario_registry",
    "se_bound",
    "ts_multi_arm_bound",
    "ts_two_arm_bound",
]
