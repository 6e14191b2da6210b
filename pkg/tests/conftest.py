import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion and print it."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
