import math

import numpy as np
import pytest
from hypothesis import strategies as st

from rabims.core import BlochVector

ACCEPTANCE_LINES = []


def record(criterion, detail, passed):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


finite = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def unit_vectors(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return BlochVector.from_array(v / n)


@st.composite
def ball_vectors(draw):
    u = draw(unit_vectors())
    r = draw(st.floats(0.0, 1.0))
    return BlochVector.from_array(u.as_array() * r)


eps_values = st.floats(0.005, 0.5)
tau_values = st.floats(0.0, 2000.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_pure(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_ball(rng, n):
    return random_pure(rng, n) * rng.uniform(0, 1, size=(n, 1)) ** (1 / 3)


TWO_PI = 2 * math.pi
