import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from convexlab import bodies as B  # noqa: E402

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Record one acceptance line; printed in the terminal summary."""

    def _record(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def cube(n=3, half=1.0):
    corners = np.array(np.meshgrid(*[[-half, half]] * n, indexing="ij")).reshape(n, -1).T
    return B.Polytope(corners)


def odd_ball(n=3, eps=0.1, radius=1.0):
    return B.OddPerturbedBall(n, radius, [(1.0, (3,) + (0,) * (n - 1))], eps)


def unit_ball(n=3, radius=1.0):
    return B.Ball(np.zeros(n), radius)


def e(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v
