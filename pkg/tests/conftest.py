import numpy as np
import pytest

from biodilate import biortho as bo

EXAMPLE_V = np.array([[1, -2], [0, -1]], dtype=complex)


def tau_matrix(tau):
    return np.array([[tau, -(tau + 1)], [0, -1]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def example_system():
    """Worked-example basis: u0=|0>, u1=(|0>+|1>)/sqrt2, zeta0=|0>-|1>, zeta1=sqrt2|1>."""
    s2 = np.sqrt(2)
    return bo.from_explicit([[1, 0], [1 / s2, 1 / s2]], [[1, -1], [0, s2]])


@pytest.fixture
def example_operator(example_system):
    return bo.BiorthogonalOperator(example_system, np.diag([1.0, -1.0]))


@pytest.fixture
def tau2_operator():
    return bo.from_eigen(tau_matrix(2.0), "modulus")[1]
