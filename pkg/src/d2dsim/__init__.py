"""Single-cell D2D underlay simulator and episodic evaluation environment."""

from .domain import (
    Action,
    ConfigError,
    Device,
    DeviceId,
    DeviceKind,
    Mode,
    PathlossSpec,
    Position,
    RfParams,
    ScenarioConfig,
    dbm_to_mw,
    default_scenario,
    mw_to_dbm,
    thermal_noise_dbm,
)
from .env import D2DEnv, EnvStepResult, SingleAgentView, observation_length
from .linkbudget import (
    LinkReport,
    capacity_mbps,
    compute_step_reports,
    eirp,
    gated_capacity_mbps,
    rx_power,
    sinr_db,
)
from .pathloss import (
    FreeSpacePathloss,
    LogDistanceShadowingPathloss,
    build_pathloss_model,
    fspl,
    log_distance_shadowing,
    register_pathloss_model,
)
from .simulator import Simulator, StepMetrics, place_devices

__all__ = [
    "Action",
    "ConfigError",
    "D2DEnv",
    "Device",
    "DeviceId",
    "DeviceKind",
    "EnvStepResult",
    "FreeSpacePathloss",
    "LinkReport",
    "LogDistanceShadowingPathloss",
    "Mode",
    "PathlossSpec",
    "Position",
    "RfParams",
    "ScenarioConfig",
    "SingleAgentView",
    "Simulator",
    "StepMetrics",
    "build_pathloss_model",
    "capacity_mbps",
    "compute_step_reports",
    "dbm_to_mw",
    "default_scenario",
    "eirp",
    "fspl",
    "gated_capacity_mbps",
    "log_distance_shadowing",
    "mw_to_dbm",
    "observation_length",
    "place_devices",
    "register_pathloss_model",
    "rx_power",
    "sinr_db",
    "thermal_noise_dbm",
]

__version__ = "0.1.0"
