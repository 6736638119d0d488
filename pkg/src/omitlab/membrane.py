"""Mechanics of a square drum membrane: mass, damping, Q and thermal force.

Damping rates in this module are energy decay rates (the full width of the
mechanical line in rad/s), so that ``Q = omega_m / rate`` and the ringdown
relation ``Q = pi f tau`` hold for an amplitude ringdown time ``tau``.  The
optomechanical response works with amplitude (half-width) rates; use
:func:`mechanical_halfwidth` to cross that boundary.

Note on the gas-damped Q: an often-quoted variant carries an extra factor 2*pi,
``Q = 2 pi omega_m / (gamma_m + gamma_gas)``.  That form only agrees with the
ringdown relation if ``omega_m`` is read as an ordinary frequency in Hz.  The
standard ``Q = omega_m / (gamma_m + gamma_gas)`` with angular ``omega_m`` is
what :func:`quality_factor` returns.
"""
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS, mbar_to_pa
from .errors import OutOfValidityRange, ValidationError

#: silicon nitride, stoichiometric
SIN_DENSITY = 3100.0
#: air
AIR_MOLAR_MASS = 0.029
#: upper edge of the free-molecular-flow regime, Pa (1e-2 mbar)
FREE_MOLECULAR_CEILING = mbar_to_pa(1e-2)


@dataclass(frozen=True)
class MembraneConfig:
    side_length: float
    thickness: float
    omega_m: float
    q_intrinsic: float
    density: float = SIN_DENSITY
    refractive_index: complex = 2.0 + 2.5e-5j

    def __post_init__(self):
        for name in ("side_length", "thickness", "density", "omega_m", "q_intrinsic"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0")
        object.__setattr__(self, "refractive_index", complex(self.refractive_index))
        if self.refractive_index.imag < 0:
            raise ValidationError("refractive_index must have Im(n) >= 0 (absorbing medium)")

    @property
    def gamma_m(self):
        """Intrinsic energy damping rate, rad/s."""
        return self.omega_m / self.q_intrinsic


@dataclass(frozen=True)
class GasEnvironment:
    pressure: float = 0.0
    temperature: float = 293.0
    molar_mass: float = AIR_MOLAR_MASS

    def __post_init__(self):
        if self.pressure < 0:
            raise ValidationError("pressure must be >= 0")
        if not self.temperature > 0:
            raise ValidationError("temperature must be > 0")
        if not self.molar_mass > 0:
            raise ValidationError("molar_mass must be > 0")


def effective_mass(cfg):
    """Fundamental-mode effective mass of a square membrane (a quarter of its mass)."""
    return cfg.density * cfg.side_length**2 * cfg.thickness / 4.0


def gas_mean_speed(env):
    return np.sqrt(3.0 * CONSTANTS.R_gas * env.temperature / env.molar_mass)


def gas_damping_rate(cfg, env, ceiling=FREE_MOLECULAR_CEILING):
    """Energy damping rate from residual gas in the free-molecular regime, rad/s.

    Raises
    ------
    OutOfValidityRange
        If ``env.pressure`` is above ``ceiling`` (Pa), where the
        non-interacting molecule picture stops applying.
    """
    if env.pressure > ceiling:
        raise OutOfValidityRange(
            f"gas pressure {env.pressure:g} Pa above free-molecular ceiling {ceiling:g} Pa"
        )
    return 16.0 * env.pressure / (np.pi * cfg.density * cfg.thickness * gas_mean_speed(env))


def total_damping_rate(cfg, env):
    return cfg.gamma_m + gas_damping_rate(cfg, env)


def quality_factor(cfg, env):
    if env.pressure == 0:
        return cfg.q_intrinsic
    return cfg.omega_m / total_damping_rate(cfg, env)


def ringdown_q(f, tau):
    """Q from an amplitude ringdown time ``tau`` (s) at ordinary frequency ``f`` (Hz)."""
    if not (f > 0 and tau > 0):
        raise ValueError("f and tau must be > 0")
    return np.pi * f * tau


def mechanical_halfwidth(cfg, env):
    """Amplitude decay rate (HWHM, rad/s) as used by the optomechanical response."""
    return total_damping_rate(cfg, env) / 2.0


def thermal_force_psd(cfg, env):
    """One-sided thermal force spectral density 4 m gamma k_B T, N^2/Hz."""
    return 4.0 * effective_mass(cfg) * total_damping_rate(cfg, env) * CONSTANTS.k_B * env.temperature
