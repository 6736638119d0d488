"""Measurement chain: noisy sideband source, beat note, lock-in and noise ellipses.

The signal sideband carries amplitude-quadrature noise from a noisy drive
voltage, mimicking phase-squeezed light.  Phasors are expressed relative to
the control field, so the amplitude quadrature is the real axis.

Every stochastic routine takes a ``seed``; sweeps derive one independent
generator per grid point from (seed, index) so results do not depend on
scheduling.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from ._parallel import pmap
from .constants import TWO_PI
from .errors import AliasError, DegenerateInput, ValidationError, WindowTooShort
from .omit import transmissivity

MIN_MC_SAMPLES = 1000


@dataclass(frozen=True)
class SignalSource:
    drive_amplitude: float
    beta: float = 0.015
    drive_frequency: float = 0.0
    amplitude_noise_sigma: float = 0.0
    seed: int = 0
    phase_noise_sigma: float = 0.0  # phase-quadrature noise, relative; 0 for the usual setup

    def __post_init__(self):
        if self.amplitude_noise_sigma < 0 or self.phase_noise_sigma < 0:
            raise ValidationError("noise sigmas must be >= 0")
        if abs(self.beta * self.drive_amplitude) > 0.1:
            warnings.warn("beta*A above 0.1 rad: outside the small-modulation regime", stacklevel=2)


def task_rng(seed, index):
    """Generator for task ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def generate_signal_field(src, control_amplitude, n_samples=1, rng=None):
    """Noisy input sideband amplitudes beta (A + dA) |a_c|, dA ~ N(0, sigma A)."""
    rng = np.random.default_rng(src.seed) if rng is None else rng
    A = src.drive_amplitude
    scale = src.beta * abs(control_amplitude)
    dA = rng.normal(0.0, src.amplitude_noise_sigma * A, n_samples) if src.amplitude_noise_sigma else 0.0
    field = scale * (A + dA) + 0j
    if src.phase_noise_sigma:
        field = field + 1j * scale * rng.normal(0.0, src.phase_noise_sigma * A, n_samples)
    return np.broadcast_to(field, (n_samples,)).astype(complex)


def _wrap_half_pi(angle):
    """Wrap to (-pi/2, pi/2]."""
    a = np.mod(angle + np.pi / 2, np.pi) - np.pi / 2
    return np.where(a == -np.pi / 2, np.pi / 2, a)


@dataclass(frozen=True)
class NoiseEllipse:
    covariance: np.ndarray
    mean_phasor: complex
    n_samples: int = 0
    seed: int = None

    @property
    def degenerate(self):
        """True when the spread is zero up to rounding of the sample mean."""
        floor = (64 * np.finfo(float).eps * abs(self.mean_phasor)) ** 2
        return bool(np.trace(self.covariance) <= floor)

    def _eig(self):
        vals, vecs = np.linalg.eigh(self.covariance)
        return np.clip(vals, 0.0, None), vecs

    @property
    def angle(self):
        """Orientation of the major axis, in (-pi/2, pi/2]; 0 for a zero ellipse."""
        if self.degenerate:
            return 0.0
        vals, vecs = self._eig()
        v = vecs[:, np.argmax(vals)]
        return float(_wrap_half_pi(np.arctan2(v[1], v[0])))

    @property
    def semi_major(self):
        return float(np.sqrt(self._eig()[0].max()))

    @property
    def semi_minor(self):
        return float(np.sqrt(self._eig()[0].min()))

    @property
    def area(self):
        return np.pi * self.semi_major * self.semi_minor

    @classmethod
    def from_samples(cls, z, seed=None):
        z = np.asarray(z)
        xy = np.vstack([z.real, z.imag])
        cov = np.cov(xy)
        return cls(cov, complex(z.mean()), z.size, seed)

    def to_dict(self):
        c = self.covariance
        return {
            "cov_aa": float(c[0, 0]), "cov_ap": float(c[0, 1]), "cov_pp": float(c[1, 1]),
            "mean_re": self.mean_phasor.real, "mean_im": self.mean_phasor.imag,
            "angle_rad": self.angle, "semi_major": self.semi_major, "semi_minor": self.semi_minor,
            "degenerate": self.degenerate, "n_samples": self.n_samples, "seed": self.seed,
        }


def _rotation(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def propagate_ellipse_closed_form(ellipse, t):
    """Ellipse after multiplication of the field by the complex transmissivity ``t``."""
    if ellipse.degenerate:
        raise DegenerateInput("input covariance is zero")
    R = _rotation(np.angle(t))
    cov = abs(t) ** 2 * R @ ellipse.covariance @ R.T
    return NoiseEllipse(cov, complex(t * ellipse.mean_phasor), ellipse.n_samples, ellipse.seed)


def ellipse_monte_carlo(src, p, Omega, n_samples, control_amplitude=1.0, rng=None):
    """Sample noisy sidebands, pass them through t(Omega) and fit the output ellipse.

    A noiseless source yields a zero-covariance ellipse whose ``degenerate``
    flag is set instead of raising.
    """
    if n_samples < MIN_MC_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_MC_SAMPLES}")
    rng = np.random.default_rng(src.seed) if rng is None else rng
    field = generate_signal_field(src, control_amplitude, n_samples, rng)
    out = transmissivity(p, Omega) * field
    return NoiseEllipse.from_samples(out, seed=src.seed)


def beat_signal(control, signal, Omega, duration, sample_rate, sigma_det=0.0, rng=None):
    """Photodetector power for control plus sideband, sampled from t = 0.

    The beat term is 2 |a_c| |a_s| cos(Omega t + arg a_s - arg a_c), so a lock-in
    referenced to cos(Omega t) reads back the sideband phase relative to the
    control.  Returns ``(times, power)``.
    """
    if sample_rate <= 4 * Omega / TWO_PI:
        raise AliasError("sample rate must exceed four times the beat frequency")
    n = int(round(duration * sample_rate)) + 1
    t = np.arange(n) / sample_rate
    p = np.abs(control + signal * np.exp(1j * Omega * t)) ** 2
    if sigma_det:
        rng = np.random.default_rng() if rng is None else rng
        p = p + rng.normal(0.0, sigma_det, n)
    return t, p


@dataclass(frozen=True)
class LockInResult:
    I: float
    Q: float
    integration_time: float

    @property
    def magnitude(self):
        return float(np.hypot(self.I, self.Q))

    @property
    def phase(self):
        return float(np.arctan2(self.Q, self.I))


def demodulate(times, series, Omega, integration_time=None):
    """Dual-phase lock-in over the first ``integration_time`` seconds of the record.

    I = (2/T) int s cos(Omega t) dt and Q = -(2/T) int s sin(Omega t) dt (trapezoidal).
    """
    times = np.asarray(times, dtype=float)
    series = np.asarray(series, dtype=float)
    span = times[-1] - times[0]
    T = span if integration_time is None else integration_time
    if T < 10 * TWO_PI / Omega:
        raise WindowTooShort("integration time shorter than ten reference periods")
    if T > span * (1 + 1e-12):
        raise WindowTooShort("record shorter than the integration time")
    sel = times - times[0] <= T * (1 + 1e-12)
    t, s = times[sel], series[sel]
    T = t[-1] - t[0]
    I = 2.0 / T * trapezoid(s * np.cos(Omega * t), t)
    Q = -2.0 / T * trapezoid(s * np.sin(Omega * t), t)
    return LockInResult(float(I), float(Q), float(T))


def _batch_angle_error(z, batches=10):
    angles = np.array([NoiseEllipse.from_samples(b).angle for b in np.array_split(z, batches)])
    return float(np.std(angles, ddof=1) / np.sqrt(batches))


def full_chain_sweep(src, p, Omega, n_noise_trials, control_amplitude=1.0, periods=1000,
                     samples_per_period=16, sigma_det=0.0, workers=None):
    """Lock-in and Monte Carlo measurement of |t|, phase and ellipse angle per frequency.

    The lock-in window is a whole number of beat periods sampled at an integer
    number of points per period.  Returns CSV-ready columns.
    """
    Omega = np.atleast_1d(np.asarray(Omega, dtype=float))
    if n_noise_trials < MIN_MC_SAMPLES:
        raise ValueError(f"n_noise_trials must be >= {MIN_MC_SAMPLES}")

    def one(k):
        w = Omega[k]
        rng = task_rng(src.seed, k)
        t = transmissivity(p, w)
        a_in = src.beta * src.drive_amplitude * control_amplitude
        fs = samples_per_period * w / TWO_PI
        times, series = beat_signal(control_amplitude, t * a_in, w, periods * TWO_PI / w, fs,
                                    sigma_det, rng)
        li = demodulate(times, series, w)
        z = transmissivity(p, w) * generate_signal_field(src, control_amplitude, n_noise_trials, rng)
        ell = NoiseEllipse.from_samples(z)
        return (li.magnitude / (2 * control_amplitude * a_in), li.phase,
                np.degrees(ell.angle), np.degrees(_batch_angle_error(z)))

    rows = np.array(pmap(one, range(Omega.size), workers), dtype=float).reshape(-1, 4)
    return {
        "f_Hz": Omega / TWO_PI,
        "t_abs": rows[:, 0],
        "phase_rad": rows[:, 1],
        "theta_deg": rows[:, 2],
        "theta_mc_err_deg": rows[:, 3],
    }
