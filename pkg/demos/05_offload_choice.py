"""The classic two-pair allocation puzzle, solved exactly.

One uplink CUE holds RB 0 and RB 1 is idle. Pair A sits a few meters from
the CUE; pair B is several cell-widths of interference away. Which pair
should reuse the CUE's resource block?

Intuition: pair A next to the CUE would drown in (and cause) interference,
so the distant pair B shares RB 0 and pair A gets the idle RB 1. The
exhaustive oracle confirms that over every joint assignment.
"""

import itertools

import numpy as np

from d2dsim import Device, DeviceId, DeviceKind, Position, default_scenario
from d2dsim.agents import exhaustive_oracle
from d2dsim.domain import Action, Mode, PathlossSpec
from d2dsim.linkbudget import compute_step_reports
from d2dsim.simulator import Simulator

config = default_scenario(num_due_pairs=2, seed=0).with_updates(
    num_rbs=2, num_cues=1, pathloss_model=PathlossSpec(sigma_db=0.0)
)
sim = Simulator(config)

positions = {
    (DeviceKind.CELLULAR_UE, 0): (350.0, 100.0),
    (DeviceKind.D2D_TX, 0): (356.0, 116.0),   # pair A, near the CUE
    (DeviceKind.D2D_RX, 0): (352.0, 103.0),
    (DeviceKind.D2D_TX, 1): (355.0, 124.0),   # pair B, far from the CUE
    (DeviceKind.D2D_RX, 1): (357.0, 146.0),
}
roster = {DeviceId(DeviceKind.BASE_STATION, 0): Device(
    DeviceId(DeviceKind.BASE_STATION, 0), Position(0.0, 0.0), config.bs_rf)}
for (kind, index), (x, y) in positions.items():
    rf = config.cue_rf if kind is DeviceKind.CELLULAR_UE else config.due_rf
    roster[DeviceId(kind, index)] = Device(DeviceId(kind, index), Position(x, y), rf)
sim.devices = roster

cue = roster[DeviceId(DeviceKind.CELLULAR_UE, 0)].position
for name, pair in (("A", 0), ("B", 1)):
    rx = roster[DeviceId(DeviceKind.D2D_RX, pair)].position
    print(f"pair {name} receiver is {rx.distance_to(cue):5.1f} m from the CUE")

print("\nall four joint assignments at 20 dBm (rb per pair -> total Mbps):")
traffic = sim.traffic.actions(sim)
for rb_a, rb_b in itertools.product(range(2), repeat=2):
    actions = list(traffic)
    for pair, rb in ((0, rb_a), (1, rb_b)):
        actions.append(Action(DeviceId(DeviceKind.D2D_TX, pair),
                              DeviceId(DeviceKind.D2D_RX, pair), Mode.D2D,
                              rb=rb, tx_power_dbm=20.0))
    reports = compute_step_reports(
        sim.devices, actions, sim.pathloss, np.random.default_rng(0),
        carrier_freq_hz=config.carrier_freq_hz, rb_bandwidth_hz=config.rb_bandwidth_hz,
    )
    total = sum(r.capacity_mbps for r in reports)
    print(f"  A->rb{rb_a}, B->rb{rb_b}: {total:.3f}")

assignment, best = exhaustive_oracle(sim, [20.0])
winner = {0: "A", 1: "B"}
print("\noracle argmax:")
for pair, (rb, power) in assignment.items():
    role = "shares the CUE's RB" if rb == 0 else "takes the idle RB"
    print(f"  pair {winner[pair]} -> rb{rb} at {power:.0f} dBm ({role})")
print(f"  total {best:.3f} Mbps")
