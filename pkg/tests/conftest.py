import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def plus_i():
    return np.array([1, 1j]) / np.sqrt(2)


def alpha_state(alpha):
    return np.array([np.cos(alpha), 1j * np.sin(alpha)])


def bloch_state(x, y, z):
    return np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]]) / 2


def unit_vectors(rng, n, d):
    v = rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    line = f"AC{criterion:>2} {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[2:4])):
            terminalreporter.write_line(line)
