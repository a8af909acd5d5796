import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_criterion(number: int, title: str, passed: bool, detail: str):
    """Store one PASS/FAIL line; printed in the terminal summary and returned for asserts."""
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
