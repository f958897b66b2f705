import numpy as np
import pytest
from hypothesis import strategies as st

from varprod.observables import random_observable
from varprod.states import random_mixed, random_pure

seeds = st.integers(min_value=0, max_value=2**63 - 1)


def random_state(dim, rng):
    if rng.random() < 0.5:
        return random_pure(dim, rng)
    return random_mixed(dim, int(rng.integers(1, dim + 1)), rng)


def random_draw(dim, n, rng):
    return random_state(dim, rng), [random_observable(dim, rng) for _ in range(n)]


def random_complex(dim, rng):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
