import numpy as np
from hypothesis import given, strategies as st

from omitlab.constants import CONSTANTS, angular_to_hz, hz_to_angular, mbar_to_pa, pa_to_mbar


def test_codata_values():
    assert CONSTANTS.c == 299792458.0
    assert np.isclose(CONSTANTS.hbar, 1.054571817e-34, rtol=1e-9)
    assert np.isclose(CONSTANTS.k_B, 1.380649e-23, rtol=1e-9)


@given(st.floats(1e-6, 1e12))
def test_frequency_round_trip(f):
    assert np.isclose(angular_to_hz(hz_to_angular(f)), f, rtol=1e-15)


@given(st.floats(0, 1e5))
def test_pressure_round_trip(p):
    assert np.isclose(pa_to_mbar(mbar_to_pa(p)), p, rtol=1e-15)


def test_mbar_is_100_pa():
    assert mbar_to_pa(1.0) == 100.0
