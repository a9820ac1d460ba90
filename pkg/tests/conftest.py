import math

import numpy as np
import pytest

from balanced2tsp import from_coords

SQRT2 = math.sqrt(2.0)

LINE4 = [(0, 0), (1, 0), (2, 0), (3, 0)]
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def line(n, fixed=(0,), p=1):
    return from_coords([(x, 0) for x in range(n)], fixed, p)


def square(fixed=(0,), p=1):
    return from_coords(SQUARE, fixed, p)


@pytest.fixture
def line4():
    return line(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion, shown at the end of the run
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    _CRITERIA[marker.args[0]] = f"criterion {marker.args[0]}: {status}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[key])
