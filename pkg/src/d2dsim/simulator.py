"""Scenario state and the discrete-event step loop.

One step models a single LTE/NR frame: traffic-model actions (base station
and cellular UEs) are merged with externally supplied D2D actions, link
budgets are evaluated, and per-step metrics accumulate. Positions stay fixed
within an episode; ``reset`` repositions every UE.

Randomness is split into named substreams (placement, shadowing) spawned from
the master seed, so adding shadowing draws never perturbs placement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import (
    BS_ID,
    LOG_DISTANCE_SHADOWING,
    TRAFFIC_DOWNLINK_ROUND_ROBIN,
    TRAFFIC_FULL_LOAD_UPLINK,
    Action,
    Device,
    DeviceId,
    DeviceKind,
    Mode,
    Position,
    ScenarioConfig,
)
from .linkbudget import LinkReport, compute_step_reports
from .pathloss import build_pathloss_model


@dataclass(frozen=True)
class StepMetrics:
    """Aggregate outcome of one step."""

    total_capacity_mbps: float
    cue_capacity_mbps: float
    due_capacity_mbps: float
    mean_due_tx_power_dbm: float | None
    per_rb_occupancy: tuple[int, ...]
    gated_link_count: int

    def to_dict(self) -> dict:
        return {
            "total_capacity_mbps": self.total_capacity_mbps,
            "cue_capacity_mbps": self.cue_capacity_mbps,
            "due_capacity_mbps": self.due_capacity_mbps,
            "mean_due_tx_power_dbm": self.mean_due_tx_power_dbm,
            "per_rb_occupancy": list(self.per_rb_occupancy),
            "gated_link_count": self.gated_link_count,
        }


def _uniform_disc(rng: np.random.Generator, radius: float, center: Position) -> Position:
    r = radius * math.sqrt(rng.random())
    theta = 2.0 * math.pi * rng.random()
    return Position(center.x + r * math.cos(theta), center.y + r * math.sin(theta))


_MAX_PLACEMENT_ATTEMPTS = 10_000


def min_device_separation_m(config: ScenarioConfig) -> float:
    """Minimum spacing enforced between any two devices at placement time.

    The log-distance model is undefined below its reference distance, and any
    device can end up in an interference relationship with any other, so no
    two devices may be closer than that. One meter otherwise.
    """
    if config.pathloss_model.name == LOG_DISTANCE_SHADOWING:
        return max(1.0, config.pathloss_model.ref_distance_m)
    return 1.0


def place_devices(config: ScenarioConfig, rng: np.random.Generator) -> dict[DeviceId, Device]:
    """Draw a fresh roster: BS at the origin, UEs uniform in the cell disc.

    Each D2D receiver lands uniformly in the pairing disc around its
    transmitter, redrawn until it is inside the cell and not coincident with
    its transmitter. Every draw is also redrawn while it sits closer than
    the minimum device separation to anything already placed, keeping all
    link distances inside the path loss model's domain.
    """
    min_sep = min_device_separation_m(config)
    origin = Position(0.0, 0.0)
    roster: dict[DeviceId, Device] = {BS_ID: Device(BS_ID, origin, config.bs_rf)}
    taken = [origin]

    def clear(pos: Position) -> bool:
        return all(pos.distance_to(other) >= min_sep for other in taken)

    def draw(radius: float, center: Position, in_cell_check: bool) -> Position:
        for _ in range(_MAX_PLACEMENT_ATTEMPTS):
            pos = _uniform_disc(rng, radius, center)
            if in_cell_check and math.hypot(pos.x, pos.y) > config.cell_radius_m:
                continue
            if clear(pos):
                taken.append(pos)
                return pos
        raise RuntimeError("could not place a device; scenario too dense for min separation")

    cue_rf = config.cue_rf
    for m in range(config.num_cues):
        dev_id = DeviceId(DeviceKind.CELLULAR_UE, m)
        roster[dev_id] = Device(dev_id, draw(config.cell_radius_m, origin, False), cue_rf)
    for n in range(config.num_due_pairs):
        tx_id = DeviceId(DeviceKind.D2D_TX, n)
        rx_id = DeviceId(DeviceKind.D2D_RX, n)
        tx_pos = draw(config.cell_radius_m, origin, False)
        rx_pos = draw(config.due_pair_max_distance_m, tx_pos, True)
        roster[tx_id] = Device(tx_id, tx_pos, config.due_rf)
        roster[rx_id] = Device(rx_id, rx_pos, config.due_rf)
    return roster


class FullLoadUplinkTraffic:
    """Every CUE transmits to the base station on its own RB, fixed power."""

    def __init__(self, config: ScenarioConfig):
        if config.num_cues > config.num_rbs:
            raise ValueError(
                f"full-load uplink needs one RB per CUE "
                f"(num_cues={config.num_cues} > num_rbs={config.num_rbs})"
            )
        self._config = config

    def rb_for_cue(self, cue_index: int) -> int:
        return cue_index

    def actions(self, sim: "Simulator") -> list[Action]:
        power = self._config.cue_tx_power_dbm
        return [
            Action(DeviceId(DeviceKind.CELLULAR_UE, m), BS_ID, Mode.CELLULAR_UPLINK, rb=m, tx_power_dbm=power)
            for m in range(self._config.num_cues)
        ]


class DownlinkRoundRobinTraffic:
    """Base station serves one CUE per frame, cycling through them.

    A device submits at most one action per step, so full-load downlink
    (one BS transmission per RB) is not expressible; this round-robin model
    is the non-default alternative.
    """

    def __init__(self, config: ScenarioConfig):
        if config.num_cues > config.num_rbs:
            raise ValueError(
                f"downlink round robin needs one RB per CUE "
                f"(num_cues={config.num_cues} > num_rbs={config.num_rbs})"
            )
        self._config = config

    def rb_for_cue(self, cue_index: int) -> int:
        return cue_index

    def actions(self, sim: "Simulator") -> list[Action]:
        m = sim.step_index % self._config.num_cues
        return [
            Action(
                BS_ID,
                DeviceId(DeviceKind.CELLULAR_UE, m),
                Mode.CELLULAR_DOWNLINK,
                rb=m,
                tx_power_dbm=self._config.bs_rf.tx_power_dbm,
            )
        ]


_TRAFFIC_MODELS = {
    TRAFFIC_FULL_LOAD_UPLINK: FullLoadUplinkTraffic,
    TRAFFIC_DOWNLINK_ROUND_ROBIN: DownlinkRoundRobinTraffic,
}


class Simulator:
    """Owns the device roster and advances one frame per ``step`` call.

    Instances are single-threaded; run several with independent seeds for
    parallel experiments.
    """

    def __init__(self, config: ScenarioConfig, traffic_model=None, pathloss_model=None):
        problems = config.validate()
        if problems:
            raise ValueError("invalid config: " + "; ".join(problems))
        self.config = config
        self.traffic = traffic_model or _TRAFFIC_MODELS[config.traffic_model](config)
        self.pathloss = pathloss_model or build_pathloss_model(config.pathloss_model)
        self.episode_index = 0
        self.step_index = 0
        self.last_reports: list[LinkReport] = []
        self._seed_streams(config.seed)
        self.devices = place_devices(config, self._placement_rng)

    def _seed_streams(self, seed: int) -> None:
        placement_ss, shadowing_ss = np.random.SeedSequence(seed).spawn(2)
        self._placement_rng = np.random.default_rng(placement_ss)
        self._shadowing_rng = np.random.default_rng(shadowing_ss)

    def reset(self, seed: int | None = None) -> None:
        """Start a new episode: reposition every UE, zero the step counter.

        With an explicit ``seed`` both random streams are freshly reseeded,
        reproducing the roster this simulator had right after construction
        with that seed; without one the placement stream simply advances.
        """
        if seed is not None:
            self._seed_streams(seed)
        self.episode_index += 1
        self.step_index = 0
        self.last_reports = []
        self.devices = place_devices(self.config, self._placement_rng)

    def step(self, agent_actions: list[Action]) -> tuple[list[LinkReport], StepMetrics]:
        """Advance one frame with the given D2D actions.

        Agent actions may only name D2D transmitters, at most one per pair;
        devices with no action stay silent. Raises ValueError on contract
        violations and RuntimeError when the episode is already over.
        """
        if self.step_index >= self.config.episode_length_steps:
            raise RuntimeError("episode finished; call reset() before stepping again")
        for action in agent_actions:
            if action.mode is Mode.NOOP:
                continue
            if action.transmitter.kind is not DeviceKind.D2D_TX:
                raise ValueError(
                    f"agent actions may only drive D2D transmitters, got {action.transmitter}"
                )
            problems = action.violations(self.config.num_rbs)
            if problems:
                raise ValueError("; ".join(problems))
        merged = self.traffic.actions(self)
        for action in merged:
            if action.transmitter.kind is DeviceKind.D2D_TX:
                raise ValueError("traffic model must not drive D2D transmitters")
        merged = merged + sorted(
            (a for a in agent_actions if a.mode is not Mode.NOOP),
            key=lambda a: a.transmitter.sort_key,
        )
        reports = compute_step_reports(
            self.devices,
            merged,
            self.pathloss,
            self._shadowing_rng,
            carrier_freq_hz=self.config.carrier_freq_hz,
            rb_bandwidth_hz=self.config.rb_bandwidth_hz,
            gate_on_rx_power=self.config.gate_on_rx_power,
        )
        metrics = self._metrics(merged, reports)
        self.step_index += 1
        self.last_reports = reports
        return reports, metrics

    def _metrics(self, actions: list[Action], reports: list[LinkReport]) -> StepMetrics:
        cue_cap = sum(r.capacity_mbps for r in reports if not r.is_d2d)
        due_cap = sum(r.capacity_mbps for r in reports if r.is_d2d)
        due_powers = [
            a.tx_power_dbm
            for a in actions
            if a.mode is Mode.D2D and a.tx_power_dbm is not None
        ]
        occupancy = [0] * self.config.num_rbs
        for action in actions:
            if action.mode is not Mode.NOOP:
                occupancy[action.rb] += 1
        return StepMetrics(
            total_capacity_mbps=cue_cap + due_cap,
            cue_capacity_mbps=cue_cap,
            due_capacity_mbps=due_cap,
            mean_due_tx_power_dbm=(sum(due_powers) / len(due_powers)) if due_powers else None,
            per_rb_occupancy=tuple(occupancy),
            gated_link_count=sum(1 for r in reports if r.gated),
        )

    # -- convenience accessors ------------------------------------------------

    def cue_positions(self) -> list[Position]:
        return [
            self.devices[DeviceId(DeviceKind.CELLULAR_UE, m)].position
            for m in range(self.config.num_cues)
        ]

    def pair_devices(self, pair: int) -> tuple[Device, Device]:
        return (
            self.devices[DeviceId(DeviceKind.D2D_TX, pair)],
            self.devices[DeviceId(DeviceKind.D2D_RX, pair)],
        )
