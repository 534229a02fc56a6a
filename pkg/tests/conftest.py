import numpy as np
import pytest

from qtexture.states import make_rng, random_mixed


@pytest.fixture
def rng():
    return make_rng(1234)


def random_states(n, dims=(2, 3, 4, 5, 6), seed=0):
    """Deterministic mix of full-rank and rank-deficient states."""
    rng = make_rng(seed)
    out = []
    for i in range(n):
        d = dims[i % len(dims)]
        out.append(random_mixed(d, int(rng.integers(1, d + 1)), rng))
    return out


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
