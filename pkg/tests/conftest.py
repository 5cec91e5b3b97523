import numpy as np
import pytest

from qcorr.states import BipartiteState, random_state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_hermitian(dim, seed):
    r = np.random.default_rng(seed)
    z = r.standard_normal((dim, dim)) + 1j * r.standard_normal((dim, dim))
    return (z + z.conj().T) / 2


def random_two_qubit(seed, rank=4):
    return BipartiteState(random_state(4, rank, seed))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
