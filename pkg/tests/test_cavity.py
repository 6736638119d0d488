import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from omitlab.cavity import (
    CavityConfig, MembraneOptics, cavity_resonance_shift, coupled_linewidth, coupling_constant,
    finesse_scan, free_spectral_range, membrane_slab_optics, mirror_coupling_rates,
    resonance_finesse, transmission_spectrum,
)
from omitlab.constants import CONSTANTS
from omitlab.errors import DomainError, GridTooCoarse, ValidationError


def test_coupling_rates(cavity):
    g1, g2 = mirror_coupling_rates(cavity)
    assert g1 == pytest.approx(CONSTANTS.c * cavity.T1 / (4 * cavity.length), rel=1e-15)
    assert g2 / g1 == pytest.approx(cavity.T2 / cavity.T1)


def test_fsr(cavity):
    assert free_spectral_range(cavity) == pytest.approx(CONSTANTS.c / 0.17, rel=1e-15)


def test_linewidth_bridge(cavity):
    F = 2 * np.pi / (cavity.T1 + cavity.T2)
    assert coupled_linewidth(F, cavity) == pytest.approx(sum(mirror_coupling_rates(cavity)), rel=1e-12)


def test_empty_cavity_finesse_and_peak(cavity):
    F, _, T = resonance_finesse(cavity, None, 0.0)
    total = cavity.T1 + cavity.T2 + cavity.excess_loss
    assert F == pytest.approx(2 * np.pi / total, rel=2e-4)
    assert T == pytest.approx(4 * cavity.T1 * cavity.T2 / total**2, rel=1e-4)


def test_lossless_slab_conserves_energy(membrane):
    opt = membrane_slab_optics(replace(membrane, refractive_index=2.0), 1064e-9)
    assert abs(opt.r_m) ** 2 + abs(opt.t_m) ** 2 == pytest.approx(1.0, abs=1e-14)
    assert opt.absorption == pytest.approx(0.0, abs=1e-14)


def test_slab_regression_anchor(membrane):
    opt = membrane_slab_optics(membrane, 1064e-9)
    assert abs(opt.r_m) ** 2 == pytest.approx(0.14849, rel=1e-4)
    assert opt.absorption == pytest.approx(2.3097e-5, rel=1e-3)


def test_thin_slab_limit(membrane):
    opt = membrane_slab_optics(replace(membrane, thickness=1e-15), 1064e-9)
    assert abs(opt.r_m) < 1e-7


def test_resonance_shift_and_g0_limits(cavity):
    z = np.linspace(-400e-9, 400e-9, 31)
    assert np.all(coupling_constant(z, 0.0, cavity) == 0)
    base = CONSTANTS.c / cavity.length * np.pi / 2
    assert np.allclose(cavity_resonance_shift(z, 0.0, cavity), base)
    with pytest.raises(DomainError):
        coupling_constant(z, 1.0, cavity)
    with pytest.raises(DomainError):
        cavity_resonance_shift(z, -0.1, cavity)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5e-7, 5e-7), st.floats(0.01, 0.95))
def test_g0_odd_and_periodic(z, r):
    cfg = CavityConfig(0.085, 245.1e-6, 16.93e-6)
    g = coupling_constant(z, r, cfg)
    scale = coupling_constant(cfg.wavelength / 8, 0.99, cfg)  # rounding in sin() is relative to this
    assert coupling_constant(-z, r, cfg) == pytest.approx(-g, abs=1e-12 * scale)
    assert coupling_constant(z + cfg.wavelength / 2, r, cfg) == pytest.approx(g, abs=1e-9 * scale)


def test_g0_matches_finite_difference(cavity):
    z = np.linspace(10e-9, 250e-9, 25)
    h = 1e-12
    fd = (cavity_resonance_shift(z + h, 0.385, cavity) - cavity_resonance_shift(z - h, 0.385, cavity)) / (2 * h)
    assert np.allclose(coupling_constant(z, 0.385, cavity), fd, rtol=1e-6)


def test_transmission_grid_guard(cavity):
    with pytest.raises(GridTooCoarse):
        transmission_spectrum(cavity, None, 0.0, np.linspace(-1e6, 1e6, 3))


def test_transmission_peak_on_resonance(cavity):
    _, peak_hz, _ = resonance_finesse(cavity, None, 0.0)
    lw = 2 * np.pi * free_spectral_range(cavity) / (2 * np.pi / (cavity.T1 + cavity.T2 + cavity.excess_loss))
    d = 2 * np.pi * (peak_hz + np.linspace(-3 * lw, 3 * lw, 601))
    T = transmission_spectrum(cavity, None, 0.0, d)
    assert np.argmax(T) == 300


def test_finesse_periodic(cavity, membrane):
    z = np.linspace(0, cavity.wavelength / 2, 4, endpoint=False)
    a = finesse_scan(cavity, membrane, z)
    b = finesse_scan(cavity, membrane, z + cavity.wavelength / 2)
    assert np.allclose(a, b, rtol=1e-6)


def test_symmetric_mirrors_never_beat_empty_finesse(membrane):
    cfg = CavityConfig(0.085, 100e-6 + 1e-12, 100e-6, 1064e-9, 18.4e-6)
    F0 = resonance_finesse(cfg, None, 0.0)[0]
    z = np.linspace(0, cfg.wavelength / 2, 8, endpoint=False)
    assert np.all(finesse_scan(cfg, membrane, z) <= F0 * (1 + 1e-6))


def test_thread_count_does_not_change_results(cavity, membrane, monkeypatch):
    z = np.linspace(0, 300e-9, 4)
    monkeypatch.setenv("OMITLAB_THREADS", "1")
    serial = finesse_scan(cavity, membrane, z)
    monkeypatch.setenv("OMITLAB_THREADS", "4")
    assert np.array_equal(finesse_scan(cavity, membrane, z, workers=4), serial)


def test_cavity_validation():
    with pytest.raises(ValidationError, match=r"T1 out of \(0,1\)"):
        CavityConfig(0.085, 1.5, 1e-5)
    with pytest.warns(UserWarning):
        CavityConfig(0.085, 1e-5, 1e-4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        CavityConfig(0.085, 1e-4, 1e-5)


def test_membrane_optics_is_plain_record():
    o = MembraneOptics(0.3 + 0j, 0.9 + 0j, 0.0)
    assert o.r_m == 0.3
