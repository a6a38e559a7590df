"""Devices, channel classes and the proximity-based protocol recommendation."""

import math
from dataclasses import dataclass, field

D2DWL = "D2DWL"  # device-to-device wireless
D2DW = "D2DW"  # device-to-device wired
O2C = "O2C"  # owner-to-cloud
CHANNEL_KINDS = (D2DWL, D2DW, O2C)

SAME_TIME = "same-time"
DIFFERENT_TIME = "different-time"

# usage classes from the smart-home device survey, plus the two O2C endpoints
DEVICE_CLASSES = (
    "assistant",
    "healthcare",
    "lighting",
    "lock",
    "hvac",
    "controller",
    "hygiene",
    "camera",
    "meter",
    "smart-dust",
    "entertainment",
    "phone",
    "owner",
    "cloud",
)

# meters; beyond this two wireless devices are not considered co-located
WIRELESS_RANGE_M = 30.0

# protocols each channel class can carry in the simulator
CHANNEL_PROTOCOLS = {
    D2DWL: ("distance-bounding", "iso-ke", "sigma", "sigma4", "tls", "baseline"),
    D2DW: ("iso-ke", "sigma", "sigma4", "tls", "baseline"),
    O2C: ("schnorr", "okamoto", "tls"),
}


@dataclass(frozen=True)
class DeviceProfile:
    identity: str
    device_class: str = "controller"
    position: tuple = (0.0, 0.0)
    channels: frozenset = frozenset({D2DWL, D2DW})

    def __post_init__(self):
        if not self.identity:
            raise ValueError("device identity must be non-empty")
        if self.device_class not in DEVICE_CLASSES:
            raise ValueError(f"unknown device class {self.device_class!r}")
        object.__setattr__(self, "position", tuple(float(c) for c in self.position))
        object.__setattr__(self, "channels", frozenset(self.channels))
        unknown = self.channels - set(CHANNEL_KINDS)
        if unknown:
            raise ValueError(f"unknown channel kinds {sorted(unknown)}")

    def distance_to(self, other):
        return math.dist(self.position, other.position)


@dataclass(frozen=True)
class ChannelConfig:
    """Propagation model: speed of light for wireless, fixed latency otherwise."""

    wired_latency_ns: int = 1_000_000
    cloud_latency_ns: int = 20_000_000
    signal_speed: float = 2.998e8
    session_timeout_ns: int = 10_000_000_000

    def __post_init__(self):
        if self.wired_latency_ns < 0 or self.cloud_latency_ns < 0:
            raise ValueError("latencies must be non-negative")
        if self.session_timeout_ns <= 0:
            raise ValueError("session timeout must be positive")


@dataclass(frozen=True)
class Recommendation:
    channel: str
    family: str
    protocols: tuple = field(default_factory=tuple)
    note: str = ""

    @property
    def in_scope(self):
        return bool(self.protocols)


def _co_located(a, b):
    return D2DWL in a.channels and D2DWL in b.channels and a.distance_to(b) <= WIRELESS_RANGE_M


def classify_interaction(a, b, timing):
    """Map two devices and a timing relation to a protocol family."""
    if timing not in (SAME_TIME, DIFFERENT_TIME):
        raise ValueError(f"timing must be {SAME_TIME!r} or {DIFFERENT_TIME!r}")
    cloud = "cloud" in (a.device_class, b.device_class) or (a.channels & b.channels) == {O2C}
    if timing == SAME_TIME:
        if not cloud and _co_located(a, b):
            return Recommendation(D2DWL, "distance-bounding", ("distance-bounding", "sigma"),
                                  "same time, same space: proximity check over the wireless link")
        return Recommendation(D2DW, "key-exchange", ("iso-ke", "sigma", "tls"),
                              "same time, different space: authenticated key exchange")
    if cloud or not _co_located(a, b):
        return Recommendation(O2C, "identification-commitment-delegation",
                              ("schnorr", "okamoto", "pedersen", "pre", "paillier"),
                              "different time, different space: owner-to-cloud")
    return Recommendation(D2DWL, "scheduling", (),
                          "different time, same space needs a scheduling protocol; out of scope")
