"""Walk one cellular uplink through the full link budget, stage by stage.

A single UE 200 m from the base station transmits at 23 dBm on one 180 kHz
resource block. We print every correction applied on the way to capacity,
then show what a co-channel interferer does to it.
"""

from d2dsim import (
    Device,
    DeviceId,
    DeviceKind,
    Position,
    RfParams,
    capacity_mbps,
    eirp,
    fspl,
    gated_capacity_mbps,
    rx_power,
    sinr_db,
    thermal_noise_dbm,
)

FREQ_HZ = 2.1e9
BANDWIDTH_HZ = 180e3
noise = thermal_noise_dbm(BANDWIDTH_HZ)

cue = Device(
    DeviceId(DeviceKind.CELLULAR_UE, 0),
    Position(200.0, 0.0),
    RfParams(tx_power_dbm=23.0, noise_dbm=noise),
)
station = Device(
    DeviceId(DeviceKind.BASE_STATION, 0),
    Position(0.0, 0.0),
    RfParams(
        tx_power_dbm=43.0,
        antenna_gain_dbi=17.5,
        body_loss_db=0.0,
        cable_loss_db=2.0,
        rx_sensitivity_dbm=-123.4,
        noise_dbm=noise,
    ),
)

print("transmit side")
print(f"  tx power                 {cue.rf.tx_power_dbm:8.2f} dBm")
print(f"  subcarrier split (s=12)  {-10 * 2.0791812460476247:8.2f} dB")  # 10*log10(12)
print(f"  interference margin      {-cue.rf.interference_margin_db:8.2f} dB")
print(f"  body loss                {-cue.rf.body_loss_db:8.2f} dB")
print(f"  EIRP                     {eirp(cue):8.2f} dBm")

distance = cue.position.distance_to(station.position)
loss = fspl(FREQ_HZ, distance)
print("\npropagation")
print(f"  distance                 {distance:8.1f} m")
print(f"  free-space loss          {loss:8.2f} dB")

level = rx_power(cue, station, cue.rf.tx_power_dbm, loss)
print("\nreceive side (base station chain: +17.5 ant, -2 cable)")
print(f"  received power           {level:8.2f} dBm")
print(f"  noise floor              {noise:8.2f} dBm")

clean = sinr_db(level, [], noise)
print(f"  SINR, no interference    {clean:8.2f} dB")
print(f"  capacity                 {capacity_mbps(clean, BANDWIDTH_HZ / 1e6):8.3f} Mbps")

# now a D2D transmitter 350 m out reuses the same RB at 15 dBm
due = Device(
    DeviceId(DeviceKind.D2D_TX, 0),
    Position(-350.0, 60.0),
    RfParams(tx_power_dbm=15.0, noise_dbm=noise),
)
interferer_level = rx_power(due, station, 15.0, fspl(FREQ_HZ, due.position.distance_to(station.position)))
shared = sinr_db(level, [interferer_level], noise)
cap, gated = gated_capacity_mbps(shared, BANDWIDTH_HZ / 1e6, station.rf.rx_sensitivity_dbm)
print("\nsame link with a 15 dBm D2D transmitter sharing the RB from 355 m")
print(f"  interference at BS       {interferer_level:8.2f} dBm")
print(f"  SINR                     {shared:8.2f} dB")
print(f"  gated capacity           {cap:8.3f} Mbps (gated={gated})")
