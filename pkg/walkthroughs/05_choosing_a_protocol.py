"""
Which protocol for which interaction
=====================================

Two dimensions decide the family: whether both devices act at the same time,
and whether they share the same physical space.
"""

from hansec.sim import D2DW, D2DWL, DIFFERENT_TIME, O2C, SAME_TIME, DeviceProfile, classify_interaction

phone = DeviceProfile("phone", "phone", (0, 0), {D2DWL, D2DW, O2C})
lock = DeviceProfile("front-door", "lock", (3, 4), {D2DWL, D2DW})
meter = DeviceProfile("meter", "meter", (80, 0), {D2DWL, D2DW})
cloud = DeviceProfile("cloud", "cloud", (0, 0), {O2C})

for a, b, timing in (
    (phone, lock, SAME_TIME),
    (phone, meter, SAME_TIME),
    (phone, cloud, DIFFERENT_TIME),
    (meter, phone, DIFFERENT_TIME),
    (phone, lock, DIFFERENT_TIME),
):
    rec = classify_interaction(a, b, timing)
    protocols = ", ".join(rec.protocols) or "none in this suite"
    print(f"{a.identity} / {b.identity}, {timing}: {rec.channel} {rec.family} -> {protocols}")
