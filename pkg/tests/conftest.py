import numpy as np
import pytest

from qbl import algebra as alg

N_SAMPLES = 10_000
SEED = 20240611


def series_exp(A, terms=30):
    """Truncated power series for the matrix exponential; independent of the closed form."""
    A = np.asarray(A, dtype=complex)
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, terms):
        term = term @ A / k
        out = out + term
    return out


@pytest.fixture(scope="session")
def group_samples():
    """10^4 seeded elements with h_max = 3, x_max = 2."""
    return alg.sample_groups(SEED, N_SAMPLES, 3.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sl2(rng, scale=1.0):
    """Generic SL(2,C) element drawn independently of the Mostow sampler."""
    a = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) * scale
    return a / np.sqrt(np.linalg.det(a))


def close(a, b, tol):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) <= tol


