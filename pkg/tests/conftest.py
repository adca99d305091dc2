import numpy as np
import pytest

from distframes.distmap import auto_grid, builtin_map
from distframes.testspace import hermite_space


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def fourier16():
    return builtin_map("fourier", hermite_space(16))


@pytest.fixture(scope="session")
def fourier12():
    return builtin_map("fourier", hermite_space(12))


@pytest.fixture(scope="session")
def delta16():
    space = hermite_space(16)
    return builtin_map("delta", space, auto_grid(space))


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
