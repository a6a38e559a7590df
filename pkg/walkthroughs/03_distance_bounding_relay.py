"""
Proximity by round-trip time, and why a relay cannot fake it
=============================================================

A door lock accepts the phone only if it answers 32 timed challenges fast
enough to be within 10 m.  A relay that forwards the exchange from a phone
far away adds delay in both directions, and the lock's estimate grows with
that delay.
"""

from hansec.proximity import BoundingConfig, DBProver, DBVerifier, RadioChannel, db_run, distance_from_rtt
from hansec.sim import D2DWL, DeviceProfile, run_scenario

config = BoundingConfig()
key = bytes(32)  # pre-shared between phone and lock

print("200 ns round trip =", round(distance_from_rtt(200), 2), "m")

# %% Honest phone at 5 m
result = db_run(DBVerifier(key, config), DBProver(key, config), config, RadioChannel(5.0))
print(f"honest phone: {result.estimated_distance:.3f} m, {result.verdict}, {result.messages} messages")

# %% Relay delay sweep, with the phone standing next to the lock
print("\nrelay delay (ns, each way) -> estimated distance (m)")
for delay in range(0, 100, 10):
    r = db_run(DBVerifier(key, config), DBProver(key, config), config, RadioChannel(0.0, delay))
    print(f"{delay:4d} -> {r.estimated_distance:7.2f}  {r.verdict}")

# %% The same attack inside the simulator, phone 40 m away
lock = DeviceProfile("lock", "lock", (0, 0), {D2DWL})
phone = DeviceProfile("phone", "phone", (40, 0), {D2DWL})
out = run_scenario([lock, phone], "distance-bounding", "relay", seed=2, adversary_params={"relay_delay_ns": 67})
print("\nsimulated relay:", out.verdict, f"estimate {out.metrics['estimated_distance_m']:.2f} m")
