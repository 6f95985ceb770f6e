import numpy as np
import pytest

from lotsizer import PartSpec, PlanningInstance, load_case_study

from _instances import seed

_acceptance: dict[str, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(seed())


@pytest.fixture(scope="session")
def case_study():
    return load_case_study()


@pytest.fixture
def toy():
    """1 part, lead time 1, h = 1, A = 2, prices 10/10/9/10, demand 5 in periods 3 and 4."""
    part = PartSpec(1, lead_time=1, ordering_cost=2.0, holding_cost=1.0)
    return PlanningInstance.from_arrays([part], [[0, 0, 5, 5]], [[10, 10, 9, 10]])


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (crit, report.outcome.upper())


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (crit, outcome) in sorted(_acceptance.items(), key=lambda kv: kv[1][0]):
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {crit}  ({nodeid.split('::')[-1]})")
