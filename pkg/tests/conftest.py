import numpy as np
import pytest

from omitlab.cavity import CavityConfig
from omitlab.constants import hz_to_angular
from omitlab.membrane import MembraneConfig
from omitlab.omit import OmitParams


@pytest.fixture
def cavity():
    return CavityConfig(0.085, 245.1e-6, 16.93e-6, 1064e-9, 18.4e-6)


@pytest.fixture
def membrane():
    return MembraneConfig(1e-3, 50e-9, hz_to_angular(402.7e3), 1.5e6)


def make_params(ratio=20.0, gamma_m=np.pi * 0.27, gamma_opt=np.pi * 14.73, eta=0.9):
    """OMIT parameters with omega_m / gamma = ratio and a chosen optical damping."""
    omega_m = hz_to_angular(402.7e3)
    gamma = omega_m / ratio
    p = OmitParams(eta * gamma, (1 - eta) * gamma, 0.0, gamma_m, omega_m, 38.75e-12)
    return p.with_gamma_opt(gamma_opt)


@pytest.fixture
def params():
    return make_params()
