import os
import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    status = "PASS" if report.passed else "SKIP" if report.skipped else "FAIL"
    _criteria.append((label, status))


@pytest.fixture(autouse=True)
def _record_criterion(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_criteria, key=lambda c: (int(re.match(r"\d+", c[0]).group()), c[0])):
        terminalreporter.write_line(f"[{status}] criterion {label}")


@pytest.fixture
def tmp_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


REAL_DATA_DIR = os.environ.get("DIVIDELINE_REAL_DATA")
