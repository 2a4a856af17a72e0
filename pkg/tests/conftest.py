import time

import pytest

_ACCEPTANCE_LINES = []


class AcceptanceRecorder:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self):
        self.start = time.perf_counter()

    def record(self, number: int, title: str, passed: bool, detail: str):
        elapsed = time.perf_counter() - self.start
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} | {detail} | {elapsed:.1f}s"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line


@pytest.fixture
def acceptance():
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
