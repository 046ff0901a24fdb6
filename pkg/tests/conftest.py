import numpy as np
import pytest

from cvactivation.fock import DensityMatrix, FockCutoff


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_density(rng, dim, cutoff=None, rank=None):
    """Ginibre-random density matrix supported on the first ``dim`` levels."""
    cutoff = dim if cutoff is None else cutoff
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m /= np.real(np.trace(m))
    full = np.zeros((cutoff, cutoff), dtype=complex)
    full[:dim, :dim] = m
    return DensityMatrix(full, FockCutoff(cutoff))
