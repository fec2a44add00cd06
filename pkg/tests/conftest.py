from __future__ import annotations

import math
from pathlib import Path

import pytest

from lizardlink.assembly import default_lizard, load_assembly_file
from lizardlink.fivebar import FiveBarGeometry

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
SQRT2 = math.sqrt(2.0)

_criteria: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and (report.when == "call" or (report.when == "setup" and report.failed)):
        number, title = marker.args
        _criteria.append((number, title, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict in sorted(_criteria):
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")


@pytest.fixture
def sqrt2_geom() -> FiveBarGeometry:
    return FiveBarGeometry(2.0, 1.0, SQRT2, SQRT2, 1.0)


@pytest.fixture
def stretched_geom() -> FiveBarGeometry:
    return FiveBarGeometry(2.0, 1.0, 1.0, 1.0, 1.0)


@pytest.fixture
def separated_geom() -> FiveBarGeometry:
    return FiveBarGeometry(2.0, 1.0, 0.5, 0.5, 1.0)


@pytest.fixture(scope="session")
def lizard():
    return default_lizard()


@pytest.fixture(scope="session")
def sqrt2_assembly():
    return load_assembly_file(FIXTURES / "sqrt2.json")
