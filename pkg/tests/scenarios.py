"""Hand-built geometries shared by agent and acceptance tests."""

from d2dsim.domain import (
    Device,
    DeviceId,
    DeviceKind,
    PathlossSpec,
    Position,
    default_scenario,
)
from d2dsim.env import D2DEnv
from d2dsim.simulator import Simulator


def fixed_roster(config, positions):
    """Replace random placement with explicit positions.

    ``positions`` maps (kind, index) -> (x, y); the base station stays at the
    origin automatically.
    """
    roster = {}
    bs_id = DeviceId(DeviceKind.BASE_STATION, 0)
    roster[bs_id] = Device(bs_id, Position(0.0, 0.0), config.bs_rf)
    for (kind, index), (x, y) in positions.items():
        dev_id = DeviceId(kind, index)
        rf = config.cue_rf if kind is DeviceKind.CELLULAR_UE else config.due_rf
        roster[dev_id] = Device(dev_id, Position(float(x), float(y)), rf)
    return roster


TWO_PAIR_POSITIONS = {
    # one CUE; pair 0 ("A") hugs it, pair 1 ("B") sits clearly farther out
    (DeviceKind.CELLULAR_UE, 0): (350.0, 100.0),
    (DeviceKind.D2D_TX, 0): (356.0, 116.0),
    (DeviceKind.D2D_RX, 0): (352.0, 103.0),
    (DeviceKind.D2D_TX, 1): (355.0, 124.0),
    (DeviceKind.D2D_RX, 1): (357.0, 146.0),
}


def two_pair_offload_config():
    """Two RBs, one uplink CUE, two pairs, no shadowing.

    The optimal deterministic allocation parks the distant pair (index 1) on
    the CUE's RB 0 and the close pair (index 0) on the idle RB 1.
    """
    return default_scenario(num_due_pairs=2, seed=0).with_updates(
        num_rbs=2, num_cues=1, pathloss_model=PathlossSpec(sigma_db=0.0)
    )


def two_pair_offload_sim() -> Simulator:
    config = two_pair_offload_config()
    sim = Simulator(config)
    sim.devices = fixed_roster(config, TWO_PAIR_POSITIONS)
    return sim


def two_pair_offload_env() -> D2DEnv:
    env = D2DEnv(two_pair_offload_config())
    env.reset()
    env.sim.devices = fixed_roster(env.config, TWO_PAIR_POSITIONS)
    return env
