import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_record():
    """Record and assert one pass/fail line for an acceptance criterion."""

    def rec(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion:02d} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return rec


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
