"""Reference allocation policies: random, greedy distance heuristics, and an
exhaustive oracle for tiny instances.

A policy maps (env, observations, rng) to {pair id -> discrete action index}.
All of them are stateless given the rng, except the oracle which caches its
search result for the current episode's geometry.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .domain import Action, DeviceId, DeviceKind, Mode, Position
from .env import D2DEnv
from .linkbudget import compute_step_reports
from .simulator import Simulator

GREEDY_FOCUSED = "focused"
GREEDY_PER_PAIR = "per_pair"

ORACLE_MAX_SEARCH = 10**6


class NoopPolicy:
    """Keeps every pair silent; useful as a no-D2D baseline at any density."""

    def act(self, env: D2DEnv, observations, rng) -> dict[int, int]:
        return {}


class RandomPolicy:
    """Uniform draw over the full (rb, power) grid, independently per pair."""

    def act(self, env: D2DEnv, observations, rng: np.random.Generator) -> dict[int, int]:
        n = env.action_map.n
        return {pair: int(rng.integers(0, n)) for pair in sorted(observations)}


def _midpoint(sim: Simulator, pair: int) -> Position:
    tx, rx = sim.pair_devices(pair)
    return Position((tx.position.x + rx.position.x) / 2.0, (tx.position.y + rx.position.y) / 2.0)


class GreedyDistancePolicy:
    """Share RBs with geographically distant CUEs at a fixed power.

    A privileged baseline: it reads true positions from the simulator rather
    than the observations. Two spread strategies:

    * ``focused`` (default): every pair shares the RB of the single most
      isolated CUE, the one maximizing its minimum distance to any pair
      midpoint. Concentrating all D2D interference on one victim is what
      keeps the heuristic above the no-D2D baseline at higher densities.
    * ``per_pair``: each pair independently picks the CUE farthest from its
      own midpoint. Both strategies coincide for a single pair.

    Ties break toward the lowest RB index. With ``prefer_idle_rbs`` and spare
    RBs available, pairs claim idle RBs first (most CUE-endangered pairs get
    priority) and only the remainder share.
    """

    def __init__(self, power_dbm: float = 11.0, spread: str = GREEDY_FOCUSED,
                 prefer_idle_rbs: bool = False):
        if spread not in (GREEDY_FOCUSED, GREEDY_PER_PAIR):
            raise ValueError(f"unknown spread strategy {spread!r}")
        self.power_dbm = power_dbm
        self.spread = spread
        self.prefer_idle_rbs = prefer_idle_rbs

    def act(self, env: D2DEnv, observations, rng) -> dict[int, int]:
        sim = env.sim
        config = env.config
        pairs = sorted(observations)
        if not pairs:
            return {}
        power_index = env.action_map.nearest_power_index(self.power_dbm)
        cues = sim.cue_positions()
        rb_of_cue = [sim.traffic.rb_for_cue(m) for m in range(config.num_cues)]
        midpoints = {pair: _midpoint(sim, pair) for pair in pairs}

        choices: dict[int, int] = {}
        remaining = list(pairs)
        if self.prefer_idle_rbs:
            idle = sorted(set(range(config.num_rbs)) - set(rb_of_cue))
            if idle:
                def endangerment(pair: int) -> float:
                    mid = midpoints[pair]
                    return min(mid.distance_to(c) for c in cues)

                by_risk = sorted(remaining, key=lambda p: (endangerment(p), p))
                for pair, rb in zip(by_risk, idle):
                    choices[pair] = rb
                remaining = [p for p in remaining if p not in choices]

        if remaining:
            if self.spread == GREEDY_FOCUSED:
                def isolation(m: int) -> float:
                    return min(cues[m].distance_to(midpoints[p]) for p in pairs)

                victim = max(range(len(cues)), key=lambda m: (isolation(m), -rb_of_cue[m]))
                for pair in remaining:
                    choices[pair] = rb_of_cue[victim]
            else:
                for pair in remaining:
                    mid = midpoints[pair]
                    victim = max(
                        range(len(cues)),
                        key=lambda m: (cues[m].distance_to(mid), -rb_of_cue[m]),
                    )
                    choices[pair] = rb_of_cue[victim]

        return {
            pair: env.action_map.encode(rb, power_index) for pair, rb in choices.items()
        }


def exhaustive_oracle(
    sim: Simulator, candidate_powers_dbm: list[float]
) -> tuple[dict[int, tuple[int, float]], float]:
    """Enumerate every joint (rb, power) assignment and return an argmax of
    total gated capacity for the simulator's current geometry.

    Only valid for deterministic propagation (zero shadowing). Ties break
    toward the lexicographically smallest joint assignment. The search size
    (num_rbs * len(powers)) ** num_pairs must stay within 10**6.
    """
    if not sim.pathloss.deterministic:
        raise ValueError("exhaustive oracle requires a deterministic pathloss model (sigma=0)")
    config = sim.config
    n_pairs = config.num_due_pairs
    per_pair = [(rb, p) for rb in range(config.num_rbs) for p in candidate_powers_dbm]
    search_size = len(per_pair) ** n_pairs
    if search_size > ORACLE_MAX_SEARCH:
        raise ValueError(f"search size {search_size} exceeds {ORACLE_MAX_SEARCH}")

    traffic_actions = sim.traffic.actions(sim)
    throwaway_rng = np.random.default_rng(0)

    def evaluate(joint) -> float:
        actions = list(traffic_actions)
        for pair, (rb, power) in enumerate(joint):
            actions.append(
                Action(
                    DeviceId(DeviceKind.D2D_TX, pair),
                    DeviceId(DeviceKind.D2D_RX, pair),
                    Mode.D2D,
                    rb=rb,
                    tx_power_dbm=power,
                )
            )
        reports = compute_step_reports(
            sim.devices,
            actions,
            sim.pathloss,
            throwaway_rng,
            carrier_freq_hz=config.carrier_freq_hz,
            rb_bandwidth_hz=config.rb_bandwidth_hz,
            gate_on_rx_power=config.gate_on_rx_power,
        )
        return sum(r.capacity_mbps for r in reports)

    best_joint = None
    best_value = -math.inf
    for joint in itertools.product(per_pair, repeat=n_pairs):
        value = evaluate(joint)
        if value > best_value:
            best_value = value
            best_joint = joint
    assignment = {pair: choice for pair, choice in enumerate(best_joint or ())}
    return assignment, best_value


class OraclePolicy:
    """Plays the exhaustive argmax; recomputed once per episode geometry."""

    def __init__(self, candidate_powers_dbm: list[float] | None = None):
        self.candidate_powers_dbm = candidate_powers_dbm
        self._cache: tuple[int, dict[int, int]] | None = None

    def act(self, env: D2DEnv, observations, rng) -> dict[int, int]:
        episode = env.sim.episode_index
        if self._cache is not None and self._cache[0] == episode:
            return dict(self._cache[1])
        powers = self.candidate_powers_dbm
        if powers is None:
            powers = [env.config.due_power_grid()[-1]]
        assignment, _ = exhaustive_oracle(env.sim, powers)
        actions = {}
        for pair, (rb, power) in assignment.items():
            power_index = env.action_map.nearest_power_index(power)
            actions[pair] = env.action_map.encode(rb, power_index)
        self._cache = (episode, dict(actions))
        return actions


POLICIES = {
    "noop": NoopPolicy,
    "random": RandomPolicy,
    "greedy": GreedyDistancePolicy,
    "greedy-per-pair": lambda: GreedyDistancePolicy(spread=GREEDY_PER_PAIR),
    "oracle": OraclePolicy,
}


def make_policy(name: str):
    try:
        factory = POLICIES[name]
    except KeyError:
        known = ", ".join(sorted(POLICIES))
        raise ValueError(f"unknown policy '{name}' (known: {known})") from None
    return factory()
