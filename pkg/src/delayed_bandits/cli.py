"""Command-line interface.

Subcommands:

* ``run``            simulate a scenario and write its regret CSV
* ``bounds``         minimize the policy regret bounds for a scenario
* ``list-scenarios`` show the built-in scenario registry

Exit codes: 0 on success, 1 for configuration errors, 2 for runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

from . import bounds as bnd
from . import rng as streams
from .config import ConfigError, ScenarioConfig, load_scenario_file, materialize_delay, materialize_means
from .env import BanditInstance
from .harness import run_scenario
from .scenarios import scenario_registry

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with the config-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _resolve_scenario(ref: str) -> ScenarioConfig:
    """A scenario reference is a registry name or a path to a JSON file."""
    registry = scenario_registry()
    if ref in registry:
        return registry[ref]
    if os.path.exists(ref):
        return load_scenario_file(ref)
    raise ConfigError(
        f"{ref!r} is neither a built-in scenario ({', '.join(sorted(registry))}) "
        "nor a readable config file"
    )


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    changes = {}
    if args.policies is not None:
        changes["policies"] = tuple(p.strip() for p in args.policies.split(",") if p.strip())
    if args.reps is not None:
        changes["replications"] = args.reps
    if args.horizon is not None:
        changes["horizon"] = args.horizon
    if args.seed is not None:
        changes["seed"] = args.seed
    return config.replace(**changes) if changes else config


def _cmd_run(args) -> int:
    config = _apply_overrides(_resolve_scenario(args.scenario), args)
    start = time.perf_counter()
    run_scenario(config, out_dir=args.out, workers=args.workers)
    elapsed = time.perf_counter() - start
    print(
        f"{config.name}: {len(config.policies)} policies x {config.replications} "
        f"replications x {config.horizon} rounds in {elapsed:.1f}s -> "
        f"{os.path.join(args.out, config.name + '.csv')}"
    )
    return 0


def _format_q(q: tuple[float, ...]) -> str:
    return ";".join(f"{x:g}" for x in q)


def _cmd_bounds(args) -> int:
    config = _apply_overrides(_resolve_scenario(args.scenario), args)
    inst_rng = streams.substream(config.seed, 0, streams.INSTANCE_STREAM)
    means = materialize_means(config, inst_rng)
    delay_model, _ = materialize_delay(config, inst_rng)
    if not delay_model.is_iid:
        raise ConfigError(
            f"scenario {config.name!r} uses {delay_model.family} delays, which have "
            "no stationary marginal; regret bounds are undefined"
        )
    instance = BanditInstance(means)
    inp = bnd.BoundInput.from_model(instance, delay_model, config.horizon)
    ts_eval = bnd.ts_two_arm_bound if config.arms == 2 else bnd.ts_multi_arm_bound
    rows = []
    for name, evaluator in (("ts", ts_eval), ("se", bnd.se_bound)):
        value = bnd.minimize_bound(evaluator, inp)
        rows.append((config.name, name, value))

    print(f"bounds for scenario {config.name!r} (instance of replication 0, seed {config.seed})")
    for scenario, name, value in rows:
        note = f"  [{'; '.join(value.omitted)}]" if value.omitted else ""
        shown = "inf" if math.isinf(value.value) else f"{value.value:.6g}"
        print(f"  {name:<4} {shown:>14}  q* = {_format_q(value.q)}{note}")

    out_path = os.path.join(args.out, f"{config.name}_bounds.csv")
    try:
        os.makedirs(args.out, exist_ok=True)
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["scenario", "bound", "value", "q_star"])
            for scenario, name, value in rows:
                writer.writerow([scenario, name, repr(value.value), _format_q(value.q)])
    except OSError as exc:
        raise RuntimeError(f"cannot write bounds under {args.out}: {exc}") from exc
    print(f"wrote {out_path}")
    return 0


def _cmd_list(_args) -> int:
    for name, cfg in sorted(scenario_registry().items()):
        means = "sampled" if isinstance(cfg.means, dict) else str(list(cfg.means))
        print(
            f"{name:<12} K={cfg.arms:<3} T={cfg.horizon:<6} R={cfg.replications:<4} "
            f"delay={dict(cfg.delay)} means={means}"
        )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="delayed-bandits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate a scenario and write its regret CSV")
    run_p.add_argument("--scenario", required=True, help="built-in name or JSON config path")
    run_p.add_argument("--policies", help="comma-separated policy names (ts,se,ducb1)")
    run_p.add_argument("--reps", type=int, help="override replication count")
    run_p.add_argument("--horizon", type=int, help="override horizon")
    run_p.add_argument("--seed", type=int, help="override master seed")
    run_p.add_argument("--workers", type=int, default=1, help="process-pool size (default 1)")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.set_defaults(func=_cmd_run)

    bounds_p = sub.add_parser("bounds", help="minimize the regret bounds for a scenario")
    bounds_p.add_argument("--scenario", required=True, help="built-in name or JSON config path")
    bounds_p.add_argument("--policies", help=argparse.SUPPRESS)
    bounds_p.add_argument("--reps", type=int, help=argparse.SUPPRESS)
    bounds_p.add_argument("--horizon", type=int, help="override horizon")
    bounds_p.add_argument("--seed", type=int, help="override master seed")
    bounds_p.add_argument("--out", required=True, help="output directory")
    bounds_p.set_defaults(func=_cmd_bounds)

    list_p = sub.add_parser("list-scenarios", help="show the built-in scenarios")
    list_p.set_defaults(func=_cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures (I/O, ...)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
