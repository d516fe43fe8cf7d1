"""Episodic environment wrapper: observation/action encoding and rewards.

Each D2D pair is an agent with a discrete action space of size
num_rbs * due_power_levels; index -> (resource block, transmit power).
Observations are per-pair real vectors built by a pluggable builder. The
default builder emits, per pair: own transmitter and receiver positions,
every CUE position (all normalized by the cell radius), the pair's previous
step SINR scaled by 50 dB, and the previous step's per-RB transmitter counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import (
    REWARD_OWN_MINUS_CUE_PENALTY,
    REWARD_SHARED_TOTAL,
    Action,
    ConfigError,
    DeviceId,
    DeviceKind,
    Mode,
    ScenarioConfig,
)
from .linkbudget import LinkReport, gated_capacity_mbps
from .simulator import Simulator, StepMetrics

SINR_OBS_SCALE_DB = 50.0
REWARD_CAPACITY_DIVISOR = 100.0


class DiscreteActionMap:
    """Bijection between flat indices and (rb, power) choices, row-major in rb."""

    def __init__(self, num_rbs: int, power_levels_dbm: list[float]):
        self.num_rbs = num_rbs
        self.power_levels_dbm = list(power_levels_dbm)
        self.n = num_rbs * len(self.power_levels_dbm)

    def decode(self, index: int) -> tuple[int, float]:
        if not 0 <= index < self.n:
            raise ValueError(f"action index {index} outside [0, {self.n})")
        p = len(self.power_levels_dbm)
        return index // p, self.power_levels_dbm[index % p]

    def encode(self, rb: int, power_index: int) -> int:
        p = len(self.power_levels_dbm)
        if not (0 <= rb < self.num_rbs and 0 <= power_index < p):
            raise ValueError(f"(rb={rb}, power_index={power_index}) outside the grid")
        return rb * p + power_index

    def nearest_power_index(self, power_dbm: float) -> int:
        levels = self.power_levels_dbm
        return min(range(len(levels)), key=lambda i: (abs(levels[i] - power_dbm), i))


def default_observation_builder(
    sim: Simulator, pair: int, last_reports: list[LinkReport]
) -> np.ndarray:
    config = sim.config
    radius = config.cell_radius_m
    tx, rx = sim.pair_devices(pair)
    parts = [tx.position.x / radius, tx.position.y / radius,
             rx.position.x / radius, rx.position.y / radius]
    for pos in sim.cue_positions():
        parts.append(pos.x / radius)
        parts.append(pos.y / radius)
    own_sinr = 0.0
    occupancy = [0.0] * config.num_rbs
    tx_id = DeviceId(DeviceKind.D2D_TX, pair)
    for report in last_reports:
        occupancy[report.rb] += 1.0
        if report.transmitter == tx_id:
            own_sinr = report.sinr_db
    parts.append(own_sinr / SINR_OBS_SCALE_DB)
    parts.extend(occupancy)
    return np.asarray(parts, dtype=np.float64)


def observation_length(num_cues: int, num_rbs: int) -> int:
    return 5 + 2 * num_cues + num_rbs


@dataclass
class EnvStepResult:
    observations: dict[int, np.ndarray]
    rewards: dict[int, float]
    done: bool
    info: dict


class D2DEnv:
    """Config-driven episodic environment over the network simulator.

    Single-threaded; run independently seeded instances for vectorized use.
    """

    def __init__(self, config: ScenarioConfig, observation_builder=None):
        problems = config.validate()
        if problems:
            raise ConfigError("invalid config: " + "; ".join(problems))
        self.config = config
        self.sim = Simulator(config)
        self.action_map = DiscreteActionMap(config.num_rbs, config.due_power_grid())
        self.pair_ids = list(range(config.num_due_pairs))
        self._build_obs = observation_builder or default_observation_builder
        self._started = False
        self._done = False

    # -- space descriptions --------------------------------------------------

    def spaces(self) -> dict:
        """Structured space description, enough for a client to self-configure."""
        c = self.config
        return {
            "num_pairs": c.num_due_pairs,
            "pair_ids": list(self.pair_ids),
            "action_space": {
                "n": self.action_map.n,
                "num_rbs": c.num_rbs,
                "num_power_levels": len(self.action_map.power_levels_dbm),
                "power_levels_dbm": list(self.action_map.power_levels_dbm),
            },
            "observation_space": {
                "length": observation_length(c.num_cues, c.num_rbs),
                "num_cues": c.num_cues,
                "num_rbs": c.num_rbs,
                "position_scale_m": c.cell_radius_m,
                "sinr_scale_db": SINR_OBS_SCALE_DB,
            },
        }

    # -- episode API -----------------------------------------------------------

    def reset(self, seed: int | None = None) -> dict[int, np.ndarray]:
        """Reposition the scenario and return first observations.

        History-dependent observation fields are zero-filled on the first
        step. The same explicit seed always reproduces the same episode.
        """
        self.sim.reset(seed)
        self._started = True
        self._done = False
        return self._observations()

    def step(self, actions: dict[int, int]) -> EnvStepResult:
        """Decode per-pair discrete actions, advance one frame.

        Pairs missing from ``actions`` take no action this step. Raises
        ValueError for unknown pairs or out-of-range indices, RuntimeError
        when called before reset or after the episode finished.
        """
        if not self._started:
            raise RuntimeError("reset required before step")
        if self._done:
            raise RuntimeError("episode finished; reset required")
        decoded: list[Action] = []
        for pair in sorted(actions):
            if pair not in self.pair_ids:
                raise ValueError(f"unknown pair {pair!r}")
            index = actions[pair]
            try:
                rb, power = self.action_map.decode(int(index))
            except (TypeError, ValueError):
                raise ValueError(
                    f"pair {pair}: action index {index!r} outside [0, {self.action_map.n})"
                ) from None
            decoded.append(
                Action(
                    DeviceId(DeviceKind.D2D_TX, pair),
                    DeviceId(DeviceKind.D2D_RX, pair),
                    Mode.D2D,
                    rb=rb,
                    tx_power_dbm=power,
                )
            )
        reports, metrics = self.sim.step(decoded)
        self._done = self.sim.step_index >= self.config.episode_length_steps
        return EnvStepResult(
            observations=self._observations(),
            rewards=self._rewards(metrics, reports),
            done=self._done,
            info={"metrics": metrics, "reports": reports},
        )

    @property
    def done(self) -> bool:
        return self._done

    def _observations(self) -> dict[int, np.ndarray]:
        return {
            pair: self._build_obs(self.sim, pair, self.sim.last_reports)
            for pair in self.pair_ids
        }

    # -- rewards ---------------------------------------------------------------

    def _rewards(self, metrics: StepMetrics, reports: list[LinkReport]) -> dict[int, float]:
        if self.config.reward_mode == REWARD_SHARED_TOTAL:
            shared = metrics.total_capacity_mbps / REWARD_CAPACITY_DIVISOR
            return {pair: shared for pair in self.pair_ids}
        return self._own_minus_penalty_rewards(reports)

    def _own_minus_penalty_rewards(self, reports: list[LinkReport]) -> dict[int, float]:
        """Per-pair reward: own capacity minus the CUE capacity destroyed on
        the pair's RB (difference to each victim's interference-free rate)."""
        bandwidth_mhz = self.config.rb_bandwidth_hz / 1e6
        cue_loss_by_rb: dict[int, float] = {}
        for report in reports:
            if report.is_d2d:
                continue
            receiver = self.sim.devices[report.receiver].rf
            clean_sinr = report.rx_power_dbm - receiver.noise_dbm
            clean_cap, _ = gated_capacity_mbps(
                clean_sinr, bandwidth_mhz, receiver.rx_sensitivity_dbm
            )
            loss = max(0.0, clean_cap - report.capacity_mbps)
            cue_loss_by_rb[report.rb] = cue_loss_by_rb.get(report.rb, 0.0) + loss
        rewards = {pair: 0.0 for pair in self.pair_ids}
        for report in reports:
            if not report.is_d2d:
                continue
            pair = report.transmitter.index
            penalty = cue_loss_by_rb.get(report.rb, 0.0)
            rewards[pair] = (report.capacity_mbps - penalty) / REWARD_CAPACITY_DIVISOR
        return rewards


class SingleAgentView:
    """Flattens the per-pair maps into one concatenated observation and one
    joint discrete action (pair 0 is the least significant digit).

    The joint space has (num_rbs * power_levels) ** num_pairs actions, so this
    is only practical for small scenarios.
    """

    def __init__(self, env: D2DEnv):
        self.env = env
        self.per_pair_n = env.action_map.n
        self.action_space_n = self.per_pair_n ** len(env.pair_ids)

    def observation_length(self) -> int:
        c = self.env.config
        return observation_length(c.num_cues, c.num_rbs) * len(self.env.pair_ids)

    def split_joint_action(self, joint: int) -> dict[int, int]:
        if not 0 <= joint < self.action_space_n:
            raise ValueError(f"joint action {joint} outside [0, {self.action_space_n})")
        actions = {}
        for pair in self.env.pair_ids:
            joint, digit = divmod(joint, self.per_pair_n)
            actions[pair] = digit
        return actions

    def join_actions(self, actions: dict[int, int]) -> int:
        joint = 0
        for pair in reversed(self.env.pair_ids):
            joint = joint * self.per_pair_n + actions[pair]
        return joint

    def _flatten(self, observations: dict[int, np.ndarray]) -> np.ndarray:
        if not observations:
            return np.zeros(0, dtype=np.float64)
        return np.concatenate([observations[p] for p in self.env.pair_ids])

    def reset(self, seed: int | None = None) -> np.ndarray:
        return self._flatten(self.env.reset(seed))

    def step(self, joint_action: int):
        result = self.env.step(self.split_joint_action(joint_action))
        rewards = result.rewards
        mean_reward = sum(rewards.values()) / len(rewards) if rewards else 0.0
        return self._flatten(result.observations), mean_reward, result.done, result.info
