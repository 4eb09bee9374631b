import pytest

from flexsky.golden import ex9, w1_ge_w2

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ex9_dataset():
    return ex9()


@pytest.fixture
def w_ge():
    return w1_ge_w2()


@pytest.fixture
def acceptance_report():
    def record(criterion: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
