import pytest

from detox import run_discovery, workloads

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def programs():
    return {name: workloads.load(name) for name in workloads.NAMES}


@pytest.fixture(scope="session")
def campaigns(programs):
    return {name: run_discovery(p) for name, p in programs.items()}


@pytest.fixture(scope="session")
def p0(programs):
    return programs["p0"]


@pytest.fixture(scope="session")
def p1(programs):
    return programs["p1"]


@pytest.fixture(scope="session")
def p1_campaign(campaigns):
    return campaigns["p1"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
