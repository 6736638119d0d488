import numpy as np
import pytest

from omitlab.constants import TWO_PI
from omitlab.detection import (
    NoiseEllipse, SignalSource, beat_signal, demodulate, ellipse_monte_carlo, full_chain_sweep,
    generate_signal_field, propagate_ellipse_closed_form, task_rng,
)
from omitlab.errors import AliasError, DegenerateInput, ValidationError, WindowTooShort
from omitlab.omit import normalized_transmissivity, rotation_angle, transmissivity


def test_signal_field_statistics():
    src = SignalSource(1.0, 0.015, amplitude_noise_sigma=0.1, seed=1)
    z = generate_signal_field(src, 2.0, 200000, task_rng(1, 0))
    assert np.mean(z.real) == pytest.approx(0.03, rel=1e-3)
    assert np.std(z.real) == pytest.approx(0.003, rel=1e-2)
    assert np.all(z.imag == 0)


def test_signal_field_noiseless_and_phase_noise():
    z = generate_signal_field(SignalSource(2.0), 1.0, 5)
    assert np.all(z == 0.03)
    src = SignalSource(1.0, phase_noise_sigma=0.1)
    assert np.std(generate_signal_field(src, 1.0, 10000, task_rng(0, 0)).imag) > 0


def test_source_guards():
    with pytest.raises(ValidationError):
        SignalSource(1.0, amplitude_noise_sigma=-1.0)
    with pytest.warns(UserWarning):
        SignalSource(10.0, 0.015)


def test_task_rng_independent_of_order():
    a = task_rng(7, 3).normal(size=4)
    task_rng(7, 1).normal(size=100)
    assert np.array_equal(task_rng(7, 3).normal(size=4), a)
    assert not np.array_equal(task_rng(7, 2).normal(size=4), a)


def test_ellipse_geometry():
    e = NoiseEllipse(np.diag([4.0, 1.0]), 1 + 0j)
    assert e.angle == 0.0 and e.semi_major == 2.0 and e.semi_minor == 1.0
    assert e.area == pytest.approx(2 * np.pi)
    z = NoiseEllipse(np.zeros((2, 2)), 0j)
    assert z.degenerate and z.angle == 0.0


def test_closed_form_propagation(params):
    e = NoiseEllipse(np.diag([1e-6, 0.0]), 0.015 + 0j)
    t = transmissivity(params, params.omega_m + 20.0)
    out = propagate_ellipse_closed_form(e, t)
    assert out.angle == pytest.approx(np.angle(t), abs=1e-12)
    assert out.semi_major == pytest.approx(abs(t) * 1e-3, rel=1e-12)
    with pytest.raises(DegenerateInput):
        propagate_ellipse_closed_form(NoiseEllipse(np.zeros((2, 2)), 0j), t)


def test_monte_carlo_matches_closed_form(params):
    src = SignalSource(1.0, amplitude_noise_sigma=0.1, seed=4)
    W = params.omega_m + 10.0
    mc = ellipse_monte_carlo(src, params, W, 100000, rng=task_rng(4, 0))
    assert mc.angle == pytest.approx(float(rotation_angle(params, W, exact_denominator=True)), abs=np.radians(0.1))


def test_monte_carlo_noiseless_is_degenerate(params):
    mc = ellipse_monte_carlo(SignalSource(1.0), params, params.omega_m, 1000)
    assert mc.degenerate and mc.angle == 0.0


def test_monte_carlo_sample_floor(params):
    with pytest.raises(ValueError):
        ellipse_monte_carlo(SignalSource(1.0, amplitude_noise_sigma=0.1), params, params.omega_m, 10)


def test_monte_carlo_seeded_reproducible(params):
    src = SignalSource(1.0, amplitude_noise_sigma=0.1, seed=9)
    a = ellipse_monte_carlo(src, params, params.omega_m + 3, 5000)
    b = ellipse_monte_carlo(src, params, params.omega_m + 3, 5000)
    assert np.array_equal(a.covariance, b.covariance)


@pytest.mark.parametrize("phi", np.linspace(-3.0, 3.0, 7))
def test_lock_in_round_trip(phi):
    W = TWO_PI * 1e3
    t, s = beat_signal(1.0, 0.02 * np.exp(1j * phi), W, 100 / 1e3, 16e3)
    li = demodulate(t, s, W)
    assert li.phase == pytest.approx(phi, abs=1e-9)
    assert li.magnitude == pytest.approx(2 * 0.02, rel=1e-9)


def test_lock_in_pure_cosine():
    W = TWO_PI * 50.0
    t = np.arange(0, 2.0 + 1e-12, 1 / 3200)
    li = demodulate(t, np.cos(W * t), W)
    assert li.I == pytest.approx(1.0, rel=1e-9)
    assert abs(li.Q) < 1e-9


def test_lock_in_guards():
    W = TWO_PI * 1e3
    with pytest.raises(AliasError):
        beat_signal(1.0, 0.01, W, 0.1, 3e3)
    t, s = beat_signal(1.0, 0.01, W, 5e-3, 16e3)
    with pytest.raises(WindowTooShort):
        demodulate(t, s, W)
    t, s = beat_signal(1.0, 0.01, W, 0.1, 16e3)
    with pytest.raises(WindowTooShort):
        demodulate(t, s, W, integration_time=1.0)


def test_lock_in_detector_noise_averages_down():
    W = TWO_PI * 1e3
    t, s = beat_signal(1.0, 0.02j, W, 1.0, 16e3, sigma_det=0.01, rng=np.random.default_rng(0))
    assert demodulate(t, s, W).phase == pytest.approx(np.pi / 2, abs=1e-2)


def test_full_chain_sweep(params):
    src = SignalSource(1.0, amplitude_noise_sigma=0.1, seed=2)
    W = params.omega_m + np.array([-30.0, 0.0, 5.0, 30.0])
    cols = full_chain_sweep(src, params, W, 2000, periods=50)
    expected = np.angle(normalized_transmissivity(params, W))
    assert np.allclose(cols["phase_rad"], expected, atol=1e-6)
    assert np.allclose(cols["t_abs"], np.abs(transmissivity(params, W)), rtol=1e-6)
    again = full_chain_sweep(src, params, W, 2000, periods=50, workers=1)
    for k in cols:
        assert np.array_equal(cols[k], again[k])
