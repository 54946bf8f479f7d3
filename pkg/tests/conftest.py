import os

import pytest
from hypothesis import settings

from tt_grouper.instance import make_instance
from tt_grouper.suites import worked_instance_a

settings.register_profile("ci", max_examples=50, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def inst_a():
    return worked_instance_a()


@pytest.fixture
def four_period():
    # four harmonic periods, header 90, max group size 600
    return make_instance(
        [("a", 4000, 510), ("b", 4000, 120), ("c", 8000, 60), ("d", 16000, 300),
         ("e", 32000, 45), ("f", 32000, 200)],
        [4000, 8000, 16000, 32000], 90, 600)


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        notes = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, notes))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, notes in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status} {name}" + (f"  [{notes}]" if notes else ""))
