import numpy as np
import pytest

from dudecap import AssociationPolicy, LinkBudget, Scenario

POLICIES = ("macro", "sc", "decoupled", "coupled")
# the reference grid: d0 in 50..2000 m (8 points) x lambda in 1e-7..1e-4 (8 log points)
GRID_D0 = tuple(float(x) for x in np.linspace(50.0, 2000.0, 8))
GRID_LAMBDA = tuple(float(x) for x in np.geomspace(1e-7, 1e-4, 8))
LAMBDA_REF = 6.25e-6
D0_REF = 250.0


@pytest.fixture
def link():
    return LinkBudget()


def make(kind, lam=LAMBDA_REF, d0=D0_REF, link=None, m=1, n=1):
    return Scenario(link or LinkBudget(), AssociationPolicy(kind, m, n), lam, d0)


_ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    status = "PASS" if report.passed else "FAIL"
    if report.passed and marker.kwargs.get("report_only"):
        status = "REPORT"
    notes = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _ACCEPTANCE_LINES.append(f"criterion {number:>2} {status}: {title}" + (f" [{notes}]" if notes else ""))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
