"""Experiment runner and protocol server.

    d2dsim run   --config cfg.json --policy greedy --episodes 100 --out run.jsonl
    d2dsim sweep --config cfg.json --policy random --densities 10,20 --trials 10 --out sweep.csv
    d2dsim serve --config cfg.json [--serve-port 5555]

``run`` streams one JSON object per step, one per episode, and a final
aggregate. ``sweep`` writes a flat CSV over (density, trial). ``serve``
speaks the newline-delimited JSON protocol on stdio or a TCP port.
Configs are the single source of truth; there are no environment-variable
overrides.
"""

from __future__ import annotations

import argparse
import math
import socket
import sys

import numpy as np

from .agents import make_policy
from .domain import ConfigError, ScenarioConfig
from .env import D2DEnv
from .protocol import run_session
from .serialize import dumps_canonical, metrics_to_dict

_POLICY_STREAM_TAG = 0x706F6C  # distinct substream for policy randomness


def _policy_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, _POLICY_STREAM_TAG]))


def _mean_sd(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "sd": None}
    mean = sum(values) / len(values)
    if len(values) < 2:
        return {"mean": mean, "sd": None}
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return {"mean": mean, "sd": math.sqrt(var)}


def run_experiment(config: ScenarioConfig, policy, episodes: int, seed: int, emit) -> dict:
    """Run ``episodes`` full episodes, emitting one record dict per step and
    per episode through ``emit``; returns (and emits) the final aggregate."""
    config = config.with_updates(seed=seed)
    env = D2DEnv(config)
    rng = _policy_rng(seed)
    episode_rows = []
    for episode in range(episodes):
        observations = env.reset()
        step_metrics = []
        step = 0
        done = False
        while not done:
            actions = policy.act(env, observations, rng)
            result = env.step(actions)
            metrics = result.info["metrics"]
            emit({"type": "step", "episode": episode, "step": step, **metrics_to_dict(metrics)})
            step_metrics.append(metrics)
            observations = result.observations
            done = result.done
            step += 1
        row = _episode_summary(episode, step_metrics)
        episode_rows.append(row)
        emit(row)
    aggregate = _aggregate(episode_rows)
    emit(aggregate)
    return aggregate


def _episode_summary(episode: int, step_metrics) -> dict:
    n = len(step_metrics)
    powers = [m.mean_due_tx_power_dbm for m in step_metrics if m.mean_due_tx_power_dbm is not None]
    return {
        "type": "episode",
        "episode": episode,
        "steps": n,
        "mean_total_capacity_mbps": sum(m.total_capacity_mbps for m in step_metrics) / n,
        "mean_cue_capacity_mbps": sum(m.cue_capacity_mbps for m in step_metrics) / n,
        "mean_due_capacity_mbps": sum(m.due_capacity_mbps for m in step_metrics) / n,
        "mean_due_tx_power_dbm": (sum(powers) / len(powers)) if powers else None,
        "mean_gated_link_count": sum(m.gated_link_count for m in step_metrics) / n,
    }


def _aggregate(episode_rows: list[dict]) -> dict:
    def collect(key):
        return [row[key] for row in episode_rows if row[key] is not None]

    return {
        "type": "aggregate",
        "episodes": len(episode_rows),
        "total_capacity_mbps": _mean_sd(collect("mean_total_capacity_mbps")),
        "cue_capacity_mbps": _mean_sd(collect("mean_cue_capacity_mbps")),
        "due_capacity_mbps": _mean_sd(collect("mean_due_capacity_mbps")),
        "due_tx_power_dbm": _mean_sd(collect("mean_due_tx_power_dbm")),
        "gated_link_count": _mean_sd(collect("mean_gated_link_count")),
    }


def sweep_seed(base_seed: int, density: int, trial: int) -> int:
    """Stable per-run seed derivation for sweeps."""
    return int(np.random.SeedSequence([base_seed, density, trial]).generate_state(1, np.uint64)[0])


def run_sweep(config: ScenarioConfig, policy_name: str, densities: list[int],
              trials: int, episodes: int, seed: int, out) -> None:
    out.write("density,trial,mean_total_capacity_mbps,mean_due_capacity_mbps,mean_due_tx_power_dbm\n")
    for density in densities:
        for trial in range(trials):
            run_config = config.with_updates(num_due_pairs=density)
            policy = make_policy(policy_name)
            aggregate = run_experiment(
                run_config, policy, episodes, sweep_seed(seed, density, trial), lambda rec: None
            )
            cells = [
                str(density),
                str(trial),
                _csv_number(aggregate["total_capacity_mbps"]["mean"]),
                _csv_number(aggregate["due_capacity_mbps"]["mean"]),
                _csv_number(aggregate["due_tx_power_dbm"]["mean"]),
            ]
            out.write(",".join(cells) + "\n")


def _csv_number(value) -> str:
    return "" if value is None else format(float(value), ".9g")


# ---------------------------------------------------------------------------
# command wiring
# ---------------------------------------------------------------------------


def _load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    config = ScenarioConfig.from_json(text)
    problems = config.validate()
    if problems:
        raise ConfigError("invalid config: " + "; ".join(problems))
    return config


def _cmd_run(args) -> int:
    config = _load_config(args.config)
    policy = make_policy(args.policy)
    seed = args.seed if args.seed is not None else config.seed
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as handle:
            run_experiment(config, policy, args.episodes, seed,
                           lambda rec: handle.write(dumps_canonical(rec) + "\n"))
    else:
        run_experiment(config, policy, args.episodes, seed,
                       lambda rec: sys.stdout.write(dumps_canonical(rec) + "\n"))
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    densities = [int(d) for d in args.densities.split(",") if d.strip()]
    if not densities:
        raise ConfigError("--densities must list at least one density")
    seed = args.seed if args.seed is not None else config.seed
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as handle:
            run_sweep(config, args.policy, densities, args.trials, args.episodes, seed, handle)
    else:
        run_sweep(config, args.policy, densities, args.trials, args.episodes, seed, sys.stdout)
    return 0


def _cmd_serve(args) -> int:
    config = _load_config(args.config)
    if args.serve_port is None:
        run_session(config, sys.stdin, sys.stdout)
        return 0
    server = socket.create_server(("127.0.0.1", args.serve_port))
    try:
        while True:
            conn, _ = server.accept()
            with conn:
                reader = conn.makefile("r", encoding="utf-8")
                writer = conn.makefile("w", encoding="utf-8")
                run_session(config, reader, writer)
    except KeyboardInterrupt:
        return 0
    finally:
        server.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="d2dsim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a policy for a number of episodes")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--policy", default="random")
    run_p.add_argument("--episodes", type=int, default=100)
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--out", default="-")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a density sweep and emit a CSV table")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--policy", default="random")
    sweep_p.add_argument("--densities", default="10,20,30,40,50")
    sweep_p.add_argument("--trials", type=int, default=10)
    sweep_p.add_argument("--episodes", type=int, default=100)
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--out", default="-")
    sweep_p.set_defaults(func=_cmd_sweep)

    serve_p = sub.add_parser("serve", help="serve the JSON-lines protocol")
    serve_p.add_argument("--config", required=True)
    serve_p.add_argument("--serve-port", type=int, default=None,
                         help="TCP port; omitted means stdio")
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
