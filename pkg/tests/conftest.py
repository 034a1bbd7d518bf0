import numpy as np
import pytest

from macsf import SupportGrid, ellipse_support

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1].split("[")[0]
        if _ACCEPTANCE.get(name, "passed") == "passed":
            _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def unit_circle():
    return SupportGrid.constant(1.0, 256)


@pytest.fixture(scope="session")
def ellipse():
    return ellipse_support(1.0, 0.8, 256)
