import pytest

from specprofile.experiments import default_suite


@pytest.fixture(scope="session")
def suite():
    return default_suite()


@pytest.fixture(scope="session")
def small_suite(suite):
    return [item for item in suite if item.graph.num_vertices <= 8]


_ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
