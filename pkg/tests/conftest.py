import numpy as np
import pytest

from fluxtripod.circuit import CircuitSpec, assign_tripod, diagonalize
from fluxtripod.noise import NoiseModel

# published device point used throughout the suite
PAPER_CIRCUIT = CircuitSpec(e_c_ghz=2.0, e_j_ghz=9.19, e_l_ghz=0.063, flux_phi0=0.17)
PAPER_TRIPOD_INDICES = (1, 0, 2, 5)


@pytest.fixture(scope="session")
def paper_spectrum():
    return diagonalize(PAPER_CIRCUIT)


@pytest.fixture(scope="session")
def paper_tripod(paper_spectrum):
    return assign_tripod(paper_spectrum, PAPER_TRIPOD_INDICES)


@pytest.fixture(scope="session")
def paper_noise():
    return NoiseModel(a_flux=3e-6, q_diel=1e6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
