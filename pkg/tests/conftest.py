import pytest

from dnsflow.network import load_fixture

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixture_network():
    return load_fixture()


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
