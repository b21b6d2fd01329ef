import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            detail = dict(report.user_properties).get("detail", "")
            _CRITERIA[value] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")


@pytest.fixture
def criterion(request, record_property):
    """Tag an acceptance test with its number; ``detail(text)`` adds a summary note."""
    marker = request.node.get_closest_marker("criterion")
    record_property("criterion", marker.args[0])

    def detail(text):
        record_property("detail", text)
        print(f"criterion {marker.args[0]}: {text}")

    return detail
