import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def rel(a, b):
    return abs(a - b) / abs(b)


def random_coupling(rng, scale=3.0):
    """Complex coupling away from zero, with non-negative imaginary part."""
    while True:
        z = complex(rng.uniform(-scale, scale), rng.uniform(0, scale))
        if abs(z) > 0.2:
            return z


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record and print one PASS/FAIL line, then assert it."""

    def check(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
