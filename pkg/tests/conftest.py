import pytest

_LINES = []


@pytest.fixture
def acceptance_lines():
    return _LINES


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, text in sorted(_LINES):
            terminalreporter.write_line(text)
