import numpy as np
import pytest

from squeezed_qubits.bath import CoefficientSet


def random_density(rng, rank=4):
    x = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_pure(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def frozen(gamma, n, m, theta):
    """Coefficients under which the time-local generator equals the Markov one."""
    return CoefficientSet(gamma * n / 2 + 0j, gamma * (n + 1) / 2 + 0j, -gamma * m * np.exp(1j * theta) / 2)
