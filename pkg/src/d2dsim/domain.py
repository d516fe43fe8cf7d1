"""Core value types shared by every part of the simulator.

All configuration and reporting is in dB/dBm; power summation happens in
linear milliwatts (see :func:`dbm_to_mw`). Every type here is immutable and
safe to share between threads.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, fields, replace

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Thermal noise density at 290 K, dBm per Hz of bandwidth.
THERMAL_NOISE_DBM_PER_HZ = -174.0


def dbm_to_mw(p_dbm: float) -> float:
    """Convert a dBm power level to milliwatts."""
    return 10.0 ** (p_dbm / 10.0)


def mw_to_dbm(p_mw: float) -> float:
    """Convert a milliwatt power to dBm. Input must be strictly positive."""
    if p_mw <= 0.0:
        raise ValueError(f"mw_to_dbm requires a positive power, got {p_mw}")
    return 10.0 * math.log10(p_mw)


def thermal_noise_dbm(bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    """Thermal noise floor (dBm) over the given bandwidth, kT*B at 290 K."""
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


class DeviceKind(enum.Enum):
    BASE_STATION = "bs"
    CELLULAR_UE = "cue"
    D2D_TX = "due_tx"
    D2D_RX = "due_rx"


@dataclass(frozen=True, order=True)
class DeviceId:
    """Identity of one radio node; D2D_TX(n) and D2D_RX(n) form pair n."""

    kind: DeviceKind = field(compare=False)
    index: int

    # Deterministic ordering used everywhere iteration order matters.
    sort_key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        order = list(DeviceKind).index(self.kind)
        object.__setattr__(self, "sort_key", (order, self.index))

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.index}"

    @staticmethod
    def parse(text: str) -> "DeviceId":
        kind_name, _, idx = text.partition(":")
        return DeviceId(DeviceKind(kind_name), int(idx))


BS_ID = DeviceId(DeviceKind.BASE_STATION, 0)


@dataclass(frozen=True)
class Position:
    """Cartesian position in meters, cell-centered (base station at origin)."""

    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class RfParams:
    """Per-device RF parameter set.

    Cable loss and amplifier gain are only meaningful on the base station;
    body loss only on UEs. Defaults are calibration choices, overridable in
    config, and documented in the README.
    """

    tx_power_dbm: float
    num_subcarriers: int = 12
    antenna_gain_dbi: float = 0.0
    interference_margin_db: float = 3.0
    body_loss_db: float = 3.0
    cable_loss_db: float = 0.0
    amplifier_gain_db: float = 0.0
    rx_sensitivity_dbm: float = -107.5
    noise_dbm: float = thermal_noise_dbm(180e3)

    def violations(self, path: str) -> list[str]:
        out = []
        if self.num_subcarriers < 1:
            out.append(f"{path}.num_subcarriers: must be >= 1 (got {self.num_subcarriers})")
        for name in ("interference_margin_db", "body_loss_db", "cable_loss_db"):
            value = getattr(self, name)
            if value < 0.0:
                out.append(f"{path}.{name}: loss terms must be >= 0 (got {value})")
        return out


@dataclass(frozen=True)
class Device:
    id: DeviceId
    position: Position
    rf: RfParams

    @property
    def is_base_station(self) -> bool:
        return self.id.kind is DeviceKind.BASE_STATION


class Mode(enum.Enum):
    CELLULAR_UPLINK = "cellular_uplink"
    CELLULAR_DOWNLINK = "cellular_downlink"
    D2D = "d2d"
    NOOP = "noop"


@dataclass(frozen=True)
class Action:
    """Per-transmitter decision: who talks to whom, on which RB, how loud.

    NoOp actions carry no rb/power semantics; both fields are ignored.
    """

    transmitter: DeviceId
    receiver: DeviceId
    mode: Mode
    rb: int | None = None
    tx_power_dbm: float | None = None

    @staticmethod
    def noop(device: DeviceId) -> "Action":
        return Action(device, device, Mode.NOOP)

    def violations(self, num_rbs: int | None = None) -> list[str]:
        """Mode/endpoint consistency checks; empty list means valid."""
        out = []
        if self.mode is Mode.NOOP:
            return out
        if self.rb is None or self.tx_power_dbm is None:
            out.append(f"action {self.transmitter}: rb and tx_power_dbm required for {self.mode.value}")
            return out
        if num_rbs is not None and not (0 <= self.rb < num_rbs):
            out.append(f"action {self.transmitter}: rb {self.rb} outside [0, {num_rbs})")
        if self.mode is Mode.D2D:
            ok = (
                self.transmitter.kind is DeviceKind.D2D_TX
                and self.receiver.kind is DeviceKind.D2D_RX
                and self.transmitter.index == self.receiver.index
            )
            if not ok:
                out.append(
                    f"action {self.transmitter}->{self.receiver}: d2d mode requires a matched pair"
                )
        elif self.mode is Mode.CELLULAR_UPLINK:
            if self.receiver.kind is not DeviceKind.BASE_STATION:
                out.append(f"action {self.transmitter}: uplink receiver must be the base station")
        elif self.mode is Mode.CELLULAR_DOWNLINK:
            if self.transmitter.kind is not DeviceKind.BASE_STATION:
                out.append(f"action {self.transmitter}: downlink transmitter must be the base station")
        return out


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

FREE_SPACE = "free_space"
LOG_DISTANCE_SHADOWING = "log_distance_shadowing"


@dataclass(frozen=True)
class PathlossSpec:
    """Declarative choice of propagation model, resolved via the registry."""

    name: str = LOG_DISTANCE_SHADOWING
    exponent: float = 2.0
    sigma_db: float = 2.7
    ref_distance_m: float = 1.0

    def violations(self) -> list[str]:
        out = []
        if self.exponent <= 0.0:
            out.append(f"pathloss_model.exponent: must be > 0 (got {self.exponent})")
        if self.sigma_db < 0.0:
            out.append(f"pathloss_model.sigma_db: must be >= 0 (got {self.sigma_db})")
        if self.ref_distance_m <= 0.0:
            out.append(f"pathloss_model.ref_distance_m: must be > 0 (got {self.ref_distance_m})")
        return out


REWARD_SHARED_TOTAL = "shared_total"
REWARD_OWN_MINUS_CUE_PENALTY = "own_minus_cue_penalty"

TRAFFIC_FULL_LOAD_UPLINK = "full_load_uplink"
TRAFFIC_DOWNLINK_ROUND_ROBIN = "downlink_round_robin"


def _default_bs_rf() -> RfParams:
    return RfParams(
        tx_power_dbm=43.0,
        antenna_gain_dbi=17.5,
        body_loss_db=0.0,
        cable_loss_db=2.0,
        amplifier_gain_db=0.0,
        rx_sensitivity_dbm=-123.4,
    )


def _default_ue_rf(tx_power_dbm: float, rx_sensitivity_dbm: float = -107.5) -> RfParams:
    return RfParams(tx_power_dbm=tx_power_dbm, rx_sensitivity_dbm=rx_sensitivity_dbm)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full declarative description of one simulation scenario."""

    cell_radius_m: float = 500.0
    carrier_freq_hz: float = 2.1e9
    rb_bandwidth_hz: float = 180e3
    num_rbs: int = 25
    num_cues: int = 25
    num_due_pairs: int = 0
    due_pair_max_distance_m: float = 30.0
    cue_tx_power_dbm: float = 23.0
    due_power_range_dbm: tuple[float, float] = (0.0, 20.0)
    due_power_levels: int = 21
    pathloss_model: PathlossSpec = field(default_factory=PathlossSpec)
    episode_length_steps: int = 10
    bs_rf: RfParams = field(default_factory=_default_bs_rf)
    cue_rf: RfParams = field(default_factory=lambda: _default_ue_rf(23.0))
    due_rf: RfParams = field(default_factory=lambda: _default_ue_rf(20.0))
    traffic_model: str = TRAFFIC_FULL_LOAD_UPLINK
    reward_mode: str = REWARD_SHARED_TOTAL
    gate_on_rx_power: bool = False
    seed: int = 0

    def with_updates(self, **kwargs) -> "ScenarioConfig":
        return replace(self, **kwargs)

    # -- validation ---------------------------------------------------------

    def validate(self) -> list[str]:
        """Return every invariant violation; an empty list means valid."""
        out: list[str] = []
        if self.cell_radius_m <= 0.0:
            out.append(f"cell_radius_m: must be > 0 (got {self.cell_radius_m})")
        if self.carrier_freq_hz <= 0.0:
            out.append(f"carrier_freq_hz: must be > 0 (got {self.carrier_freq_hz})")
        if self.rb_bandwidth_hz <= 0.0:
            out.append(f"rb_bandwidth_hz: must be > 0 (got {self.rb_bandwidth_hz})")
        if self.num_rbs < 1:
            out.append(f"num_rbs: must be >= 1 (got {self.num_rbs})")
        if self.num_cues < 1:
            out.append(f"num_cues: must be >= 1 (got {self.num_cues})")
        if self.num_due_pairs < 0:
            out.append(f"num_due_pairs: must be >= 0 (got {self.num_due_pairs})")
        if self.due_pair_max_distance_m <= 0.0:
            out.append(f"due_pair_max_distance_m: must be > 0 (got {self.due_pair_max_distance_m})")
        lo, hi = self.due_power_range_dbm
        if lo > hi:
            out.append(f"due_power_range_dbm: min must be <= max (got [{lo}, {hi}])")
        if self.due_power_levels < 1:
            out.append(f"due_power_levels: must be >= 1 (got {self.due_power_levels})")
        elif self.due_power_levels == 1 and lo != hi:
            out.append(
                "due_power_levels: a single power level cannot span "
                f"[{lo}, {hi}]; use min == max or more levels"
            )
        if self.episode_length_steps < 1:
            out.append(f"episode_length_steps: must be >= 1 (got {self.episode_length_steps})")
        out.extend(self.pathloss_model.violations())
        if (
            self.pathloss_model.name == LOG_DISTANCE_SHADOWING
            and self.num_due_pairs > 0
            and self.pathloss_model.ref_distance_m >= self.due_pair_max_distance_m
        ):
            out.append(
                "pathloss_model.ref_distance_m: must be smaller than "
                "due_pair_max_distance_m so pair placement has room"
            )
        if self.traffic_model not in (TRAFFIC_FULL_LOAD_UPLINK, TRAFFIC_DOWNLINK_ROUND_ROBIN):
            out.append(f"traffic_model: unknown model '{self.traffic_model}'")
        if self.reward_mode not in (REWARD_SHARED_TOTAL, REWARD_OWN_MINUS_CUE_PENALTY):
            out.append(f"reward_mode: unknown mode '{self.reward_mode}'")
        out.extend(self.bs_rf.violations("bs_rf"))
        out.extend(self.cue_rf.violations("cue_rf"))
        out.extend(self.due_rf.violations("due_rf"))
        return out

    def due_power_grid(self) -> list[float]:
        """Discrete DUE power levels: equal dB steps over the configured range."""
        lo, hi = self.due_power_range_dbm
        n = self.due_power_levels
        if n == 1:
            return [lo]
        step = (hi - lo) / (n - 1)
        return [lo + i * step for i in range(n)]

    # -- JSON serialization (strict schema) ---------------------------------

    def to_dict(self) -> dict:
        return {
            "cell_radius_m": self.cell_radius_m,
            "carrier_freq_hz": self.carrier_freq_hz,
            "rb_bandwidth_hz": self.rb_bandwidth_hz,
            "num_rbs": self.num_rbs,
            "num_cues": self.num_cues,
            "num_due_pairs": self.num_due_pairs,
            "due_pair_max_distance_m": self.due_pair_max_distance_m,
            "cue_tx_power_dbm": self.cue_tx_power_dbm,
            "due_power_range_dbm": list(self.due_power_range_dbm),
            "due_power_levels": self.due_power_levels,
            "pathloss_model": _pathloss_to_dict(self.pathloss_model),
            "episode_length_steps": self.episode_length_steps,
            "bs_rf": _rf_to_dict(self.bs_rf),
            "cue_rf": _rf_to_dict(self.cue_rf),
            "due_rf": _rf_to_dict(self.due_rf),
            "traffic_model": self.traffic_model,
            "reward_mode": self.reward_mode,
            "gate_on_rx_power": self.gate_on_rx_power,
            "seed": self.seed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @staticmethod
    def from_dict(data: dict) -> "ScenarioConfig":
        """Build a config from a JSON-shaped dict. Unknown fields are an error."""
        if not isinstance(data, dict):
            raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
        known = {f.name for f in fields(ScenarioConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
        kwargs = dict(data)
        if "due_power_range_dbm" in kwargs:
            rng = kwargs["due_power_range_dbm"]
            if not (isinstance(rng, (list, tuple)) and len(rng) == 2):
                raise ConfigError("due_power_range_dbm: expected [min, max]")
            kwargs["due_power_range_dbm"] = (float(rng[0]), float(rng[1]))
        if "pathloss_model" in kwargs:
            kwargs["pathloss_model"] = _pathloss_from_dict(kwargs["pathloss_model"])
        for rf_key in ("bs_rf", "cue_rf", "due_rf"):
            if rf_key in kwargs:
                base = getattr(ScenarioConfig(), rf_key)
                kwargs[rf_key] = _rf_from_dict(kwargs[rf_key], base, rf_key)
        return ScenarioConfig(**kwargs)

    @staticmethod
    def from_json(text: str) -> "ScenarioConfig":
        return ScenarioConfig.from_dict(json.loads(text))


class ConfigError(ValueError):
    """Raised for malformed or schema-violating configuration documents."""


def _rf_to_dict(rf: RfParams) -> dict:
    return {f.name: getattr(rf, f.name) for f in fields(RfParams)}


def _rf_from_dict(data: dict, base: RfParams, path: str) -> RfParams:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    known = {f.name for f in fields(RfParams)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown fields: {', '.join(unknown)}")
    return replace(base, **data)


def _pathloss_to_dict(spec: PathlossSpec) -> dict:
    if spec.name == FREE_SPACE:
        return {"name": spec.name, "exponent": spec.exponent}
    return {
        "name": spec.name,
        "exponent": spec.exponent,
        "sigma_db": spec.sigma_db,
        "ref_distance_m": spec.ref_distance_m,
    }


def _pathloss_from_dict(data: dict) -> PathlossSpec:
    if not isinstance(data, dict):
        raise ConfigError("pathloss_model: expected an object")
    known = {f.name for f in fields(PathlossSpec)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"pathloss_model: unknown fields: {', '.join(unknown)}")
    if "name" not in data:
        raise ConfigError("pathloss_model: 'name' is required")
    return PathlossSpec(**data)


def default_scenario(num_due_pairs: int = 0, seed: int = 0, **overrides) -> ScenarioConfig:
    """The bundled single-cell evaluation scenario.

    500 m cell, 2.1 GHz carrier, 25 RBs of 180 kHz shared by 25 uplink CUEs
    at 23 dBm, DUE pairs up to 30 m apart choosing 0..20 dBm, log-distance
    path loss with exponent 2.0 and 2.7 dB shadowing.
    """
    return ScenarioConfig(num_due_pairs=num_due_pairs, seed=seed, **overrides)
