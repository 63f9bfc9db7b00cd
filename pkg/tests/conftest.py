import time

import pytest

from skmaass.sklift import igusa_chi10

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def chi10_small():
    return igusa_chi10(4)


BUILD_SECONDS: dict[int, float] = {}


@pytest.fixture(scope="session")
def chi10():
    start = time.perf_counter()
    table = igusa_chi10(10)
    BUILD_SECONDS[10] = time.perf_counter() - start
    return table


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
