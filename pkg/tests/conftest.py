import random

import pytest

from hansec.group import make_group


class ScriptedRng:
    """randrange() returns the queued values first, then defers to a seeded RNG."""

    def __init__(self, values=(), seed=0):
        self.values = list(values)
        self._rng = random.Random(seed)

    def randrange(self, *args):
        if self.values:
            return self.values.pop(0)
        return self._rng.randrange(*args)

    def __getattr__(self, name):
        return getattr(self._rng, name)


@pytest.fixture
def toy():
    return make_group("toy-23")


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(params=["toy-23", "modp-1024", "prime192v1"])
def any_group(request):
    return make_group(request.param)


@pytest.fixture(params=["modp-1024", "prime192v1"])
def real_group(request):
    return make_group(request.param)


def scripted(*values, seed=0):
    return ScriptedRng(values, seed)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
