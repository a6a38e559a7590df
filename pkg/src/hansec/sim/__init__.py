"""Home-network simulator: devices, channels, adversaries and verdicts."""

from importlib import resources

from .adversary import ADVERSARIES, Evidence
from .engine import PROTOCOLS, ScenarioOutcome, Simulation, Verdict, run_scenario
from .expectations import expected_verdict, load_expectations
from .model import (
    D2DW,
    D2DWL,
    DIFFERENT_TIME,
    O2C,
    SAME_TIME,
    ChannelConfig,
    DeviceProfile,
    Recommendation,
    classify_interaction,
)
from .scenario import Scenario, load_scenario, parse_scenario
from .transcript import Transcript, TranscriptRecord, read_transcript, transcript_export


def shipped_scenarios():
    """Names of the scenario files bundled with the package."""
    folder = resources.files(__package__).joinpath("scenarios")
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".ini"))


def shipped_scenario_text(name):
    return resources.files(__package__).joinpath("scenarios", f"{name}.ini").read_text(encoding="utf-8")


__all__ = [
    "ADVERSARIES",
    "D2DW",
    "D2DWL",
    "DIFFERENT_TIME",
    "O2C",
    "PROTOCOLS",
    "SAME_TIME",
    "ChannelConfig",
    "DeviceProfile",
    "Evidence",
    "Recommendation",
    "Scenario",
    "ScenarioOutcome",
    "Simulation",
    "Transcript",
    "TranscriptRecord",
    "Verdict",
    "classify_interaction",
    "expected_verdict",
    "load_expectations",
    "load_scenario",
    "parse_scenario",
    "read_transcript",
    "run_scenario",
    "shipped_scenario_text",
    "shipped_scenarios",
    "transcript_export",
]
