import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

GOLDEN = Path(__file__).parent / "golden"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def reference_tables():
    return json.loads((GOLDEN / "reference_tables.json").read_text())


@pytest.fixture(scope="session")
def numeric_golden():
    from touchard_xi.golden import read_golden

    return read_golden(GOLDEN / "numeric.txt")


def pytest_terminal_summary(terminalreporter):
    from helpers import acceptance_lines

    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
