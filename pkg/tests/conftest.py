import math

import pytest
from hypothesis import HealthCheck, settings

from csquant import Parameters

settings.register_profile(
    "csquant",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("csquant")

ACCEPTANCE_LINES = []


@pytest.fixture
def default_params():
    return Parameters()


@pytest.fixture
def L():
    return math.pi


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
