"""Declarative scenario files (INI syntax).

Example::

    [scenario]
    name = misbinding-isoke
    protocol = iso-ke
    adversary = misbinder
    seed = 7

    [device phone]
    class = phone
    position = 0, 0
    channels = D2DWL, D2DW

    [device lock]
    class = lock
    position = 3, 4

Optional sections: ``[channels]`` (wired_latency_ns, cloud_latency_ns,
session_timeout_ns), ``[distance-bounding]`` (rounds, threshold_m,
processing_delay_ns, response_bits) and ``[adversary]`` (script parameters
such as relay_delay_ns).  Devices are listed initiator first.  Every error
names the offending line.
"""

import configparser
import re
from dataclasses import dataclass, field

from ..errors import ScenarioParseError
from ..group import GROUP_NAMES
from ..proximity import BoundingConfig
from .adversary import ADVERSARIES
from .engine import PROTOCOLS, run_scenario
from .model import CHANNEL_KINDS, DEVICE_CLASSES, ChannelConfig, DeviceProfile

_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_OPTION = re.compile(r"^\s*([^=:\s][^=:]*?)\s*[=:]")

_SCENARIO_KEYS = {"name", "protocol", "adversary", "seed", "group", "channel", "expect"}
_DEVICE_KEYS = {"class", "position", "channels"}
_CHANNEL_KEYS = {"wired_latency_ns", "cloud_latency_ns", "session_timeout_ns"}
_DB_KEYS = {"rounds", "threshold_m", "processing_delay_ns", "response_bits"}


@dataclass
class Scenario:
    name: str
    protocol: str
    devices: list
    adversary: str = "none"
    seed: int = 0
    group: str = "prime192v1"
    channel: str = None
    expect: str = None
    channel_config: ChannelConfig = field(default_factory=ChannelConfig)
    bounding_config: BoundingConfig = field(default_factory=BoundingConfig)
    adversary_params: dict = field(default_factory=dict)

    def run(self, seed=None, insecure=False):
        return run_scenario(
            self.devices, self.protocol, self.adversary,
            self.seed if seed is None else seed,
            group=self.group, channel=self.channel, channel_config=self.channel_config,
            bounding_config=self.bounding_config, insecure=insecure,
            adversary_params=self.adversary_params,
        )


def _line_index(text):
    """Map (section, option) and (section, None) to 1-based line numbers."""
    index = {}
    section = None
    for n, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        m = _SECTION.match(line)
        if m:
            section = m.group(1).strip()
            index.setdefault((section, None), n)
            continue
        m = _OPTION.match(line)
        if m and section is not None and not line[0].isspace():
            index.setdefault((section, m.group(1).strip().lower()), n)
    return index


def parse_scenario(text):
    parser = configparser.ConfigParser(interpolation=None, default_section="\x00none")
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ScenarioParseError("content before the first [section]", exc.lineno) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ScenarioParseError(exc.message.split(": ", 1)[-1], exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ScenarioParseError(f"cannot parse {line.strip()!r}", lineno) from None
    lines = _line_index(text)

    def where(section, key=None):
        return lines.get((section, key), lines.get((section, None)))

    def fail(msg, section, key=None):
        raise ScenarioParseError(msg, where(section, key))

    def convert(section, key, fn, what):
        raw = parser[section][key]
        try:
            return fn(raw)
        except (TypeError, ValueError):
            fail(f"{key} = {raw!r} is not {what}", section, key)

    def check_keys(section, allowed):
        for key in parser[section]:
            if allowed is not None and key not in allowed:
                fail(f"unknown key {key!r} in [{section}]", section, key)

    if not parser.has_section("scenario"):
        raise ScenarioParseError("missing [scenario] section", 1)
    check_keys("scenario", _SCENARIO_KEYS)
    sc = parser["scenario"]
    if "protocol" not in sc:
        fail("[scenario] needs a protocol", "scenario")
    protocol = sc["protocol"].strip()
    if protocol not in PROTOCOLS:
        fail(f"unknown protocol {protocol!r}; expected one of {', '.join(PROTOCOLS)}", "scenario", "protocol")
    adversary = sc.get("adversary", "none").strip()
    if adversary not in ADVERSARIES:
        fail(f"unknown adversary {adversary!r}", "scenario", "adversary")
    group = sc.get("group", "prime192v1").strip()
    if group not in GROUP_NAMES:
        fail(f"unknown group {group!r}", "scenario", "group")
    channel = sc.get("channel")
    if channel is not None:
        channel = channel.strip()
        if channel not in CHANNEL_KINDS:
            fail(f"unknown channel {channel!r}", "scenario", "channel")
    seed = convert("scenario", "seed", int, "an integer") if "seed" in sc else 0

    devices = []
    for section in parser.sections():
        if section in ("scenario", "channels", "distance-bounding", "adversary"):
            continue
        kind, _, identity = section.partition(" ")
        if kind != "device" or not identity.strip():
            fail(f"unknown section [{section}]", section)
        check_keys(section, _DEVICE_KEYS)
        ds = parser[section]
        cls = ds.get("class", "controller").strip()
        if cls not in DEVICE_CLASSES:
            fail(f"unknown device class {cls!r}", section, "class")
        pos = convert(section, "position", lambda s: tuple(float(v) for v in s.split(",")), "an x, y pair") \
            if "position" in ds else (0.0, 0.0)
        if len(pos) != 2:
            fail("position needs exactly two coordinates", section, "position")
        chans = frozenset(c.strip() for c in ds.get("channels", "D2DWL, D2DW").split(",") if c.strip())
        bad = sorted(chans - set(CHANNEL_KINDS))
        if bad:
            fail(f"unknown channel kinds {bad}", section, "channels")
        devices.append(DeviceProfile(identity.strip(), cls, pos, chans))
    if len(devices) < 2:
        raise ScenarioParseError("a scenario needs at least two [device ...] sections", where("scenario"))

    channel_config = ChannelConfig()
    if parser.has_section("channels"):
        check_keys("channels", _CHANNEL_KEYS)
        values = {k: convert("channels", k, int, "an integer") for k in parser["channels"]}
        try:
            channel_config = ChannelConfig(**values)
        except ValueError as exc:
            fail(str(exc), "channels")

    bounding_config = BoundingConfig()
    if parser.has_section("distance-bounding"):
        check_keys("distance-bounding", _DB_KEYS)
        types = {"rounds": int, "threshold_m": float, "processing_delay_ns": int, "response_bits": int}
        values = {k: convert("distance-bounding", k, types[k], "a number") for k in parser["distance-bounding"]}
        try:
            bounding_config = BoundingConfig(**values)
        except ValueError as exc:
            fail(str(exc), "distance-bounding")

    adversary_params = {}
    if parser.has_section("adversary"):
        adversary_params = {k: convert("adversary", k, int, "an integer") for k in parser["adversary"]}

    return Scenario(
        name=sc.get("name", "unnamed").strip(),
        protocol=protocol,
        devices=devices,
        adversary=adversary,
        seed=seed,
        group=group,
        channel=channel,
        expect=sc.get("expect"),
        channel_config=channel_config,
        bounding_config=bounding_config,
        adversary_params=adversary_params,
    )


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
