import time

import pytest

_LINES: dict = {}


class Criterion:
    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.start = time.perf_counter()
        _LINES[self.number] = f"criterion {self.number:2d} FAIL  {self.title}"
        return self

    def __exit__(self, exc_type, exc, tb):
        took = time.perf_counter() - self.start
        ok = exc_type is None and took < self.budget
        status = "PASS" if ok else "FAIL"
        line = f"criterion {self.number:2d} {status}  {self.title}  ({took:.2f}s, budget {self.budget:g}s)"
        _LINES[self.number] = line
        print(line)
        if exc_type is None:
            assert took < self.budget, f"runtime {took:.2f}s over budget {self.budget}s"
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_LINES):
            terminalreporter.write_line(_LINES[k])
