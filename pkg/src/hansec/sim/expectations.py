"""The committed attack-matrix expectation table."""

import json
from importlib import resources

from .engine import Verdict


def load_expectations():
    text = resources.files(__package__).joinpath("expectations.json").read_text(encoding="utf-8")
    return {k: Verdict.parse(v) for k, v in json.loads(text)["expected"].items()}


def expected_verdict(protocol, adversary, table=None):
    table = load_expectations() if table is None else table
    return table.get(f"{protocol}/{adversary or 'none'}")
