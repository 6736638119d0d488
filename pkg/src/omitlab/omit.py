"""Optomechanically induced transparency: reduced response and exact oracle.

Conventions: fields evolve as exp(-i Omega t); all rates are amplitude (HWHM)
rates in rad/s; ``x = Omega - omega_m`` is the sideband offset from the
mechanical resonance.

The reduced transmissivity is

    t(Omega) = t0 (x + i gamma_m) / (x + i gamma_m + i Gamma_opt),
    t0 = 2 sqrt(eta_c (1 - eta_c)),  Gamma_opt = hbar Gbar^2 / (2 m omega_m gamma),

valid in the resolved-sideband, near-resonance limit.  :func:`exact_response_oracle`
solves the linearized equations of motion without either approximation.
"""
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .constants import CONSTANTS, TWO_PI
from .errors import SingularSystem, ValidationError
from .lineshape import extract_fwhm


@dataclass(frozen=True)
class OmitParams:
    gamma1: float
    gamma2: float
    g_bar: float
    gamma_m: float
    omega_m: float
    m_eff: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "gamma_m", "omega_m", "m_eff"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0")
        if self.g_bar < 0:
            raise ValidationError("g_bar must be >= 0")

    @property
    def gamma(self):
        return self.gamma1 + self.gamma2

    @property
    def eta_c(self):
        return self.gamma1 / (self.gamma1 + self.gamma2)

    @property
    def t0(self):
        eta = self.eta_c
        return 2.0 * np.sqrt(eta * (1.0 - eta))

    @property
    def Delta(self):
        """Control detuning omega_c - omega_p = omega_m - delta."""
        return self.omega_m - self.delta

    def with_gamma_opt(self, gamma_opt):
        """Copy with ``g_bar`` chosen so that the optical damping equals ``gamma_opt``."""
        return replace(self, g_bar=g_bar_for_damping(self, gamma_opt))


@dataclass(frozen=True)
class ComplexResponse:
    omega: np.ndarray
    t: np.ndarray
    phase: np.ndarray

    @property
    def magnitude(self):
        return np.abs(self.t)


class PhaseResponse(NamedTuple):
    exact: np.ndarray
    approx: np.ndarray


def optical_damping(p):
    return CONSTANTS.hbar * p.g_bar**2 / (2.0 * p.m_eff * p.omega_m * p.gamma)


def g_bar_for_damping(p, gamma_opt):
    return np.sqrt(gamma_opt * 2.0 * p.m_eff * p.omega_m * p.gamma / CONSTANTS.hbar)


def intracavity_amplitude(P_in, omega_p, Delta, gamma1, gamma):
    """Steady-state intracavity amplitude |a| (sqrt of photon number) for input power P_in."""
    if np.any(np.asarray(P_in) < 0):
        raise ValueError("P_in must be >= 0")
    flux = P_in / (CONSTANTS.hbar * omega_p)
    return np.sqrt(2.0 * gamma1 * flux) / np.sqrt(Delta**2 + gamma**2)


def effective_susceptibility(p, omega):
    """Near-resonance effective mechanical response at ``omega = Omega - Delta``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(np.abs(omega) > p.omega_m / 10):
        warnings.warn("effective_susceptibility evaluated outside |omega| < omega_m/10", stacklevel=2)
    return (-2.0 * p.m_eff * p.omega_m * (omega - p.delta + 1j * p.gamma_m)
            - 1j * CONSTANTS.hbar * p.g_bar**2 / p.gamma)


def normalized_transmissivity(p, Omega):
    x = np.asarray(Omega, dtype=float) - p.omega_m
    return (x + 1j * p.gamma_m) / (x + 1j * (p.gamma_m + optical_damping(p)))


def transmissivity(p, Omega):
    return p.t0 * normalized_transmissivity(p, Omega)


def unwrap_from(phase, seed=0):
    """Continue ``phase`` along the grid from ``seed`` by nearest-branch steps.

    The value at ``seed`` is kept; everything else is shifted by multiples of
    2 pi so adjacent samples never jump by more than pi.
    """
    phase = np.asarray(phase, dtype=float)
    if phase.size == 0:
        return phase
    out = np.empty_like(phase)
    out[seed:] = np.unwrap(phase[seed:])
    out[:seed + 1] = np.unwrap(phase[seed::-1])[::-1]
    return out


def _far_index(Omega, centre):
    return int(np.argmax(np.abs(np.asarray(Omega) - centre)))


def phase_response(p, Omega):
    """Exact continuous phase of t_n and the far-detuned approximation -arctan(Gamma_opt / x).

    The approximation only holds for |x| >> sqrt(gamma_m Gamma_opt); near
    resonance the exact phase swings back to zero while the approximation
    heads for -+pi/2.
    """
    Omega = np.atleast_1d(np.asarray(Omega, dtype=float))
    exact = unwrap_from(np.angle(normalized_transmissivity(p, Omega)), _far_index(Omega, p.omega_m))
    x = Omega - p.omega_m
    with np.errstate(divide="ignore"):
        approx = -np.arctan(optical_damping(p) / x)
    return PhaseResponse(exact, approx)


def rotation_angle(p, Omega, exact_denominator=False):
    """Noise-ellipse rotation angle.

    With ``exact_denominator`` the denominator is x^2 + gamma_m (gamma_m + Gamma_opt),
    which makes the result identical to arg t_n; the default keeps the usual
    x^2 + gamma_m Gamma_opt form, which is off by at most gamma_m^2/(x^2 + gamma_m Gamma_opt).
    """
    x = np.asarray(Omega, dtype=float) - p.omega_m
    g = optical_damping(p)
    denom = x**2 + p.gamma_m * g
    if exact_denominator:
        denom = denom + p.gamma_m**2
    return -np.arctan(g * x / denom)


def group_delay(p, Omega):
    """Group delay d(phi)/d(Omega) of t_n, s.  Negative values are signal advance."""
    x = np.asarray(Omega, dtype=float) - p.omega_m
    a = p.gamma_m
    b = p.gamma_m + optical_damping(p)
    return b / (x**2 + b**2) - a / (x**2 + a**2)


def exact_response_oracle(p, Omega, Delta=None, max_condition=1e12, lower_sideband=True):
    """Transmission from the full linearized equations of motion.

    Solves for the mechanical displacement, the upper optical sideband
    a(Omega) and the conjugated lower sideband a^dagger(-Omega) at each
    frequency, keeping the full mechanical response
    m (omega_m^2 - Omega^2 - 2 i gamma_m Omega) and both cavity denominators.
    The output is sqrt(2 gamma2) a(Omega) / a_in(Omega).

    ``lower_sideband=False`` drops the a^dagger(-Omega) channel (see
    :func:`sideband_response`).

    Raises
    ------
    SingularSystem
        If any per-frequency system has condition number above ``max_condition``.
    """
    Omega = np.atleast_1d(np.asarray(Omega, dtype=float))
    Delta = p.Delta if Delta is None else Delta
    hbar = CONSTANTS.hbar
    g = p.gamma
    chi = p.m_eff * (p.omega_m**2 - Omega**2 - 2j * p.gamma_m * Omega)

    # unknowns: (Gbar x / gamma, a, a^dagger(-Omega)), rows scaled to O(1)
    A = np.zeros(Omega.shape + (3, 3), dtype=complex)
    if p.g_bar > 0:
        A[..., 0, 0] = chi * g / (hbar * p.g_bar**2)
        A[..., 0, 1] = 1.0
        A[..., 1, 0] = -1.0
        if lower_sideband:
            A[..., 0, 2] = 1.0
            A[..., 2, 0] = -1.0
    else:
        A[..., 0, 0] = 1.0
    A[..., 1, 1] = (Omega - Delta) / g + 1j
    A[..., 2, 2] = (-Omega - Delta) / g - 1j
    rhs = np.zeros(Omega.shape + (3, 1), dtype=complex)
    rhs[..., 1, 0] = 1j * np.sqrt(2.0 * p.gamma1) / g

    cond = np.linalg.cond(A)
    if np.any(~np.isfinite(cond)) or np.any(cond > max_condition):
        bad = Omega[np.argmax(np.where(np.isfinite(cond), cond, np.inf))]
        raise SingularSystem(f"ill-conditioned system at Omega = {bad:.6g} rad/s")
    sol = np.linalg.solve(A, rhs)[..., 0]
    t = np.sqrt(2.0 * p.gamma2) * sol[..., 1]
    phase = unwrap_from(np.angle(t), _far_index(Omega, p.omega_m))
    return ComplexResponse(Omega, t, phase)


def sideband_response(p, Omega, Delta=None):
    """Upper-sideband response: full mechanical and cavity denominators, no a^dagger(-Omega).

    Isolates the resolved-sideband approximation; the remaining gap to
    :func:`transmissivity` is the near-resonance one.
    """
    return exact_response_oracle(p, Omega, Delta, lower_sideband=False)


def feasibility_threshold(gamma_opt):
    """Largest T/Q_m (K) satisfying 8 k_B T / Q_m < hbar Gamma_opt."""
    return CONSTANTS.hbar * gamma_opt / (8.0 * CONSTANTS.k_B)


def feasibility_bound(T, Q_m, gamma_opt):
    """Return (satisfied, ratio) for the thermal-noise requirement 8 k_B T / Q_m < hbar Gamma_opt."""
    ratio = 8.0 * CONSTANTS.k_B * T / Q_m / (CONSTANTS.hbar * gamma_opt)
    return bool(ratio < 1.0), ratio


def radiation_pressure_psd(p, signal_amplitude):
    """Force noise 2 gamma1 (hbar Gbar |da_in|)^2 / (gamma^2 gamma_m), N^2/Hz."""
    return (2.0 * p.gamma1 * (CONSTANTS.hbar * p.g_bar * signal_amplitude) ** 2
            / (p.gamma**2 * p.gamma_m))


def response_sweep(p, Omega):
    """Tabulate the reduced response; columns keyed by their CSV header names."""
    Omega = np.atleast_1d(np.asarray(Omega, dtype=float))
    t = transmissivity(p, Omega)
    return {
        "f_Hz": Omega / TWO_PI,
        "re_t": t.real,
        "im_t": t.imag,
        "abs_t": np.abs(t),
        "phase_rad": phase_response(p, Omega).exact,
        "theta_rad": rotation_angle(p, Omega),
        "group_delay_s": group_delay(p, Omega),
    }


@dataclass
class PowerSweep:
    power: np.ndarray
    gamma_opt: np.ndarray
    fwhm_hz: np.ndarray
    dip_depth: np.ndarray

    def as_columns(self):
        return {
            "power_W": self.power,
            "gamma_opt_rad_s": self.gamma_opt,
            "fwhm_Hz": self.fwhm_hz,
            "dip_depth": self.dip_depth,
        }


def _fwhm_of(p):
    """Numerically extracted dip FWHM (Hz) of the reduced response."""
    half = p.gamma_m + optical_damping(p)
    x = np.linspace(-8 * half, 8 * half, 4001)
    f = (p.omega_m + x) / TWO_PI
    model = lambda fh: np.abs(normalized_transmissivity(p, fh * TWO_PI)) ** 2
    return extract_fwhm(f, model(f), model=model)


def linewidth_vs_power_sweep(p, powers, g0, omega_p, Delta=None):
    """OMIT linewidth and dip depth for each control power (W).

    ``g0`` (rad/(s m)) sets the coupling; Gbar = g0 |a| with |a| from
    :func:`intracavity_amplitude`, so Gamma_opt is proportional to power.
    At zero power the bare mechanical line (FWHM gamma_m/pi) is reported.
    """
    powers = np.atleast_1d(np.asarray(powers, dtype=float))
    Delta = p.Delta if Delta is None else Delta
    gopt, fwhm, depth = [], [], []
    for P in powers:
        a = intracavity_amplitude(P, omega_p, Delta, p.gamma1, p.gamma)
        q = replace(p, g_bar=g0 * a)
        g = optical_damping(q)
        gopt.append(g)
        fwhm.append(_fwhm_of(q) if g > 0 else p.gamma_m / np.pi)
        depth.append(p.gamma_m / (p.gamma_m + g))
    return PowerSweep(powers, np.array(gopt), np.array(fwhm), np.array(depth))


def g0_for_linewidth(p, power, fwhm_hz, omega_p, Delta=None):
    """Coupling g0 that puts the OMIT FWHM at ``fwhm_hz`` for control ``power``."""
    Delta = p.Delta if Delta is None else Delta
    gamma_opt = np.pi * fwhm_hz - p.gamma_m
    if gamma_opt <= 0:
        raise ValidationError("target linewidth is below the bare mechanical linewidth")
    a = intracavity_amplitude(power, omega_p, Delta, p.gamma1, p.gamma)
    return g_bar_for_damping(p, gamma_opt) / a
