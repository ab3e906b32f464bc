import pytest

import acceptance_log
from grid_support import grid_records


@pytest.fixture(scope="session")
def grid():
    return grid_records()


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.RESULTS):
        terminalreporter.write_line(acceptance_log.line(n))
