import pytest

from ffminden.ff import field_from_q

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def F2():
    return field_from_q(2)


@pytest.fixture(scope="session")
def F3():
    return field_from_q(3)


@pytest.fixture(scope="session")
def F4():
    return field_from_q(4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
