import pytest

# Lines recorded by the acceptance tests, printed after the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
