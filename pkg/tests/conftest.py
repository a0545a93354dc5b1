import math

import numpy as np
import pytest

from resolvability import Channel, FiniteDistribution

LOG2 = math.log(2.0)


def h2(p: float) -> float:
    """Binary entropy in nats, computed independently of the package."""
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


def random_pmf(rng: np.random.Generator, k: int) -> np.ndarray:
    p = rng.dirichlet(np.ones(k))
    return p / p.sum()


def random_channel(rng: np.random.Generator, nx: int, ny: int, labels=None) -> Channel:
    rows = rng.dirichlet(np.ones(ny), size=nx)
    rows = rows / rows.sum(axis=1, keepdims=True)
    xin = tuple(str(i) for i in range(nx))
    yout = tuple("abcdefgh"[:ny]) if labels is None else labels
    return Channel(xin, yout, rows)


@pytest.fixture
def binary():
    return ("0", "1")


@pytest.fixture
def uniform2():
    return FiniteDistribution.uniform(("0", "1"))


@pytest.fixture
def identity2():
    return Channel.identity(("0", "1"))


@pytest.fixture
def bsc01():
    return Channel.bsc(0.1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, detail = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
