import numpy as np
import pytest

from _util import instance_a, instance_b, instance_negative

_acceptance = []


@pytest.fixture
def inst_a():
    return instance_a()


@pytest.fixture
def inst_b():
    return instance_b()


@pytest.fixture
def inst_neg():
    return instance_negative()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
