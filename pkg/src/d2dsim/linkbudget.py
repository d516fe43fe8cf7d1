"""EIRP, received power, SINR and capacity for every active link in a step.

Powers are carried in dBm until they meet the SINR denominator, which is
summed in linear milliwatts; the result goes back to dB. Capacity is the
Shannon rate over the RB bandwidth, gated to zero when the receiver is below
its sensitivity threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Action, Device, DeviceId, Mode, dbm_to_mw


@dataclass(frozen=True)
class LinkReport:
    """Outcome of one transmitter->receiver link for one step."""

    transmitter: DeviceId
    receiver: DeviceId
    rb: int
    eirp_dbm: float
    rx_power_dbm: float
    interference_mw: float
    sinr_db: float
    capacity_mbps: float
    gated: bool

    @property
    def is_d2d(self) -> bool:
        from .domain import DeviceKind

        return self.transmitter.kind is DeviceKind.D2D_TX


def eirp(device: Device, tx_power_dbm: float | None = None) -> float:
    """Effective isotropic radiated power of a transmitting device, dBm.

    Subtracts the per-subcarrier split 10*log10(s) and the interference
    margin, then applies the transmit chain: antenna gain minus cable loss
    plus amplifier gain for the base station, antenna gain minus body loss
    for UEs.
    """
    rf = device.rf
    p = tx_power_dbm if tx_power_dbm is not None else rf.tx_power_dbm
    base = p - 10.0 * math.log10(rf.num_subcarriers) + rf.antenna_gain_dbi - rf.interference_margin_db
    if device.is_base_station:
        return base - rf.cable_loss_db + rf.amplifier_gain_db
    return base - rf.body_loss_db


def rx_chain_gain(receiver: Device) -> float:
    """Receive-chain correction (dB) applied after path loss."""
    rf = receiver.rf
    if receiver.is_base_station:
        return rf.antenna_gain_dbi - rf.cable_loss_db + rf.amplifier_gain_db
    return rf.antenna_gain_dbi - rf.body_loss_db


def rx_power(tx: Device, rx: Device, tx_power_dbm: float, pathloss_db: float) -> float:
    """Received signal level (dBm) at ``rx`` from ``tx`` over the given loss."""
    return eirp(tx, tx_power_dbm) - pathloss_db + rx_chain_gain(rx)


def sinr_db(signal_dbm: float, interferers_dbm: list[float], noise_dbm: float) -> float:
    """Signal to interference-plus-noise ratio in dB.

    The denominator is summed in linear milliwatts over every co-channel
    interferer plus the AWGN floor.
    """
    denom_mw = dbm_to_mw(noise_dbm)
    for p in interferers_dbm:
        denom_mw += dbm_to_mw(p)
    return signal_dbm - 10.0 * math.log10(denom_mw)


def capacity_mbps(sinr_db_value: float, bandwidth_mhz: float) -> float:
    """Shannon capacity B*log2(1 + sinr) in Mbps for bandwidth in MHz."""
    if bandwidth_mhz <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_mhz}")
    return bandwidth_mhz * math.log2(1.0 + 10.0 ** (sinr_db_value / 10.0))


def gated_capacity_mbps(
    sinr_db_value: float, bandwidth_mhz: float, sensitivity_threshold: float
) -> tuple[float, bool]:
    """Capacity with the sensitivity gate: zero when sinr < threshold.

    The boundary is inclusive; a link exactly at the threshold still counts.
    """
    if sinr_db_value >= sensitivity_threshold:
        return capacity_mbps(sinr_db_value, bandwidth_mhz), False
    return 0.0, True


def compute_step_reports(
    devices: dict[DeviceId, Device],
    actions: list[Action],
    model,
    rng,
    carrier_freq_hz: float,
    rb_bandwidth_hz: float,
    gate_on_rx_power: bool = False,
) -> list[LinkReport]:
    """Evaluate every non-NoOp link for one step.

    Each link's interference sum covers exactly the other transmitters
    assigned the same RB, received through the victim's own receive chain.
    Path loss is drawn once per directed (transmitter, receiver) pair, in
    sorted pair order, so the same draw feeds the pair whether it appears in
    a signal or an interference role and the draw sequence is deterministic.

    Raises ValueError if two actions name the same transmitter.
    """
    live = [a for a in actions if a.mode is not Mode.NOOP]
    seen: set[DeviceId] = set()
    for action in live:
        if action.transmitter in seen:
            raise ValueError(f"duplicate transmitter in actions: {action.transmitter}")
        seen.add(action.transmitter)

    by_rb: dict[int, list[Action]] = {}
    for action in live:
        by_rb.setdefault(action.rb, []).append(action)
    for group in by_rb.values():
        group.sort(key=lambda a: a.transmitter.sort_key)

    # Pre-draw losses for every (tx, rx) pair that can matter this step.
    needed: set[tuple[DeviceId, DeviceId]] = set()
    for group in by_rb.values():
        for link in group:
            for other in group:
                needed.add((other.transmitter, link.receiver))
    losses: dict[tuple[DeviceId, DeviceId], float] = {}
    for tx_id, rx_id in sorted(needed, key=lambda p: (p[0].sort_key, p[1].sort_key)):
        distance = devices[tx_id].position.distance_to(devices[rx_id].position)
        losses[(tx_id, rx_id)] = model.loss(carrier_freq_hz, distance, rng)

    bandwidth_mhz = rb_bandwidth_hz / 1e6
    reports = []
    for action in live:
        group = by_rb[action.rb]
        rx_dev = devices[action.receiver]
        signal = rx_power(
            devices[action.transmitter],
            rx_dev,
            action.tx_power_dbm,
            losses[(action.transmitter, action.receiver)],
        )
        interferer_levels = [
            rx_power(
                devices[other.transmitter],
                rx_dev,
                other.tx_power_dbm,
                losses[(other.transmitter, action.receiver)],
            )
            for other in group
            if other.transmitter != action.transmitter
        ]
        interference_mw = sum(dbm_to_mw(p) for p in interferer_levels)
        link_sinr = sinr_db(signal, interferer_levels, rx_dev.rf.noise_dbm)
        gate_value = signal if gate_on_rx_power else link_sinr
        threshold = rx_dev.rf.rx_sensitivity_dbm
        if gate_value >= threshold:
            cap, gated = capacity_mbps(link_sinr, bandwidth_mhz), False
        else:
            cap, gated = 0.0, True
        reports.append(
            LinkReport(
                transmitter=action.transmitter,
                receiver=action.receiver,
                rb=action.rb,
                eirp_dbm=eirp(devices[action.transmitter], action.tx_power_dbm),
                rx_power_dbm=signal,
                interference_mw=interference_mw,
                sinr_db=link_sinr,
                capacity_mbps=cap,
                gated=gated,
            )
        )
    return reports
