import numpy as np
import pytest

from edelstein.schedules import XiSchedule

_CRITERIA = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def unit_xi():
    return XiSchedule.constant(1.0)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    ok = report.passed
    prev = _CRITERIA.get(number, (True, []))
    _CRITERIA[number] = (prev[0] and ok, prev[1] + [report.nodeid.split("::")[-1]])


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, names = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({', '.join(names)})")
