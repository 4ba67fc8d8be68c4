import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _add(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
