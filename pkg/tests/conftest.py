import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from plvolume import build_complex, orient, pc_from_cocycle  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQUARE_VERTS = [(0, 0), (1, 0), (0, 1), (1, 1)]
SQUARE_CELLS = [[0, 1, 2], [1, 2, 3]]


@pytest.fixture
def square():
    return orient(build_complex(SQUARE_VERTS, SQUARE_CELLS))


@pytest.fixture
def worked_form(square):
    # sigma = cell 0 with volume 1, tau = cell 1 with volume 1/2
    return pc_from_cocycle(square, [Fraction(1), Fraction(1, 2)])


# -- acceptance summary -------------------------------------------------------

_CRITERIA: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call" or (report.when == "setup" and not report.passed):
        entry["ran"] += 1
        if hasattr(report, "wasxfail") or report.failed:
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number} [{status}] {entry['title']} [{entry['ran']} tests]"
        if entry["failed"]:
            line += " failing: " + ", ".join(entry["failed"])
        terminalreporter.write_line(line)
