import math

import numpy as np
import pytest

from plankkit.bodies import ConvexBody


def square(lo=0.0, hi=1.0, d=2):
    return ConvexBody.box([lo] * d, [hi] * d)


def triangle_side2():
    return ConvexBody.from_vertices([[-1.0, 0.0], [1.0, 0.0], [0.0, math.sqrt(3.0)]])


def disk(r=1.0, c=(0.0, 0.0)):
    return ConvexBody.ball(list(c), r)


@pytest.fixture
def unit_square():
    return square()


@pytest.fixture
def centered_square():
    return square(-0.5, 0.5)


@pytest.fixture
def tri():
    return triangle_side2()


@pytest.fixture
def unit_disk():
    return disk()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
