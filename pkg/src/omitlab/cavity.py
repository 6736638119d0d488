"""Membrane-in-the-middle cavity optics.

Mirror coupling rates and linewidths are amplitude (HWHM) rates in rad/s.
The transmission model is a transfer-matrix cascade

    mirror 1 | free space L/2 + z | membrane slab | free space L/2 - z | mirror 2

with ``z`` measured from the cavity midpoint.  The membrane-position phase is
evaluated at the carrier wavenumber, which keeps the model exactly periodic in
``z`` with period lambda/2 (the narrow-band assumption also behind the
``arccos`` resonance formula).
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ._parallel import pmap
from .constants import CONSTANTS, TWO_PI
from .errors import DomainError, GridTooCoarse, ValidationError

COARSE_POINTS_PER_FSR = 4096
GOLDEN_TOL = 1e-4  # of the estimated linewidth


@dataclass(frozen=True)
class CavityConfig:
    length: float
    T1: float
    T2: float
    wavelength: float = 1064e-9
    excess_loss: float = 0.0

    def __post_init__(self):
        for name in ("T1", "T2"):
            if not 0 < getattr(self, name) < 1:
                raise ValidationError(f"{name} out of (0,1)")
        if not self.length > 0:
            raise ValidationError("length must be > 0")
        if not self.wavelength > 0:
            raise ValidationError("wavelength must be > 0")
        if self.excess_loss < 0:
            raise ValidationError("excess_loss must be >= 0")
        if self.T1 + self.excess_loss / 2 >= 1 or self.T2 + self.excess_loss / 2 >= 1:
            raise ValidationError("mirror transmission plus loss share must stay below 1")
        if self.T1 <= self.T2:
            warnings.warn("T1 <= T2: cavity is not over-coupled through the input mirror", stacklevel=2)


@dataclass(frozen=True)
class MembraneOptics:
    r_m: complex
    t_m: complex
    absorption: float


def mirror_coupling_rates(cfg):
    """(gamma1, gamma2) = c T / 4L for each mirror, rad/s."""
    k = CONSTANTS.c / (4.0 * cfg.length)
    return k * cfg.T1, k * cfg.T2


def free_spectral_range(cfg):
    """Free spectral range c/2L in Hz."""
    return CONSTANTS.c / (2.0 * cfg.length)


def coupled_linewidth(finesse, cfg):
    """HWHM linewidth pi f_FSR / F, rad/s."""
    if not np.all(np.asarray(finesse) > 0):
        raise ValueError("finesse must be > 0")
    return np.pi * free_spectral_range(cfg) / finesse


def membrane_slab_optics(mem, wavelength):
    """Normal-incidence amplitude coefficients of a single dielectric slab."""
    n = complex(mem.refractive_index)
    r0 = (1 - n) / (1 + n)
    phase = np.exp(2j * TWO_PI * n * mem.thickness / wavelength)
    denom = 1 - r0**2 * phase
    r_m = r0 * (1 - phase) / denom
    t_m = (1 - r0**2) * np.sqrt(phase) / denom
    absorption = 1.0 - abs(r_m) ** 2 - abs(t_m) ** 2
    return MembraneOptics(complex(r_m), complex(t_m), float(max(absorption, 0.0)))


def _check_reflectivity(r_m_mag):
    if not 0 <= r_m_mag < 1:
        raise DomainError(f"|r_m| must lie in [0, 1), got {r_m_mag}")


def cavity_resonance_shift(z, r_m_mag, cfg, phase_offset=0.0):
    """(c/L) arccos(|r_m| cos(4 pi z / lambda + phase_offset)), rad/s."""
    _check_reflectivity(r_m_mag)
    arg = 2 * TWO_PI * np.asarray(z) / cfg.wavelength + phase_offset
    return CONSTANTS.c / cfg.length * np.arccos(r_m_mag * np.cos(arg))


def coupling_constant(z, r_m_mag, cfg, phase_offset=0.0):
    """G0 = d omega_c / dz, rad/(s m)."""
    _check_reflectivity(r_m_mag)
    q = 2 * TWO_PI / cfg.wavelength
    arg = q * np.asarray(z) + phase_offset
    return (CONSTANTS.c / cfg.length * r_m_mag * q * np.sin(arg)
            / np.sqrt(1 - (r_m_mag * np.cos(arg)) ** 2))


def _linewidth_estimate_hz(cfg):
    """Empty-cavity FWHM in Hz."""
    return free_spectral_range(cfg) * (cfg.T1 + cfg.T2 + cfg.excess_loss) / TWO_PI


def _mirror(t_power, loss):
    r = math.sqrt(1 - t_power - loss)
    t = math.sqrt(t_power)
    return r, t


def _amplitude(cfg, optics, z, dnu):
    """Complex amplitude transmission at laser detunings ``dnu`` (Hz) from c/lambda.

    Transfer matrices map (right-going, left-going) fields on the right of an
    element to the left of it.  A two-port with reflections r_L, r_R and
    reciprocal transmission t has M = [[1, -r_R], [r_L, t^2 - r_L r_R]] / t.
    """
    dnu = np.asarray(dnu, dtype=float)
    loss = cfg.excess_loss / 2
    r1, t1 = _mirror(cfg.T1, loss)
    r2, t2 = _mirror(cfg.T2, loss)
    # propagation phase split into carrier part (reduced mod 2 pi) and detuning part
    k0L = math.fmod(TWO_PI * cfg.length / cfg.wavelength, TWO_PI)
    dkL = TWO_PI * dnu * cfg.length / CONSTANTS.c

    # mirror 1: outside reflection -r1, inside +r1; only the top row of the
    # cascade feeds the transmission 1/M00
    a00, a01 = 1 / t1, -r1 / t1
    if optics is None:
        p = np.exp(-1j * (k0L + dkL))
        m00, m01 = a00 * p, a01 / p
    else:
        zphase = math.fmod(2 * TWO_PI * z / cfg.wavelength, TWO_PI) / 2  # k0 z
        ph1 = np.exp(-1j * (k0L / 2 + dkL / 2 + zphase))
        ph2 = np.exp(-1j * (k0L / 2 + dkL / 2 - zphase))
        rm, tm = optics.r_m, optics.t_m
        s00, s01, s10, s11 = 1 / tm, -rm / tm, rm / tm, (tm * tm - rm * rm) / tm
        # top row of mirror1 . P1
        b00, b01 = a00 * ph1, a01 / ph1
        # . slab
        c00 = b00 * s00 + b01 * s10
        c01 = b00 * s01 + b01 * s11
        # . P2
        m00, m01 = c00 * ph2, c01 / ph2
    # . mirror 2: inside reflection +r2, outside -r2
    e00, e10 = 1 / t2, r2 / t2
    total00 = m00 * e00 + m01 * e10
    return 1.0 / total00


def transmission_spectrum(cfg, mem, z, detuning):
    """Power transmission versus laser detuning (rad/s) for membrane position ``z``.

    Pass ``mem=None`` for the empty cavity.

    Raises
    ------
    GridTooCoarse
        If the detuning grid spacing exceeds a tenth of the estimated linewidth.
    """
    detuning = np.asarray(detuning, dtype=float)
    dnu = detuning / TWO_PI
    if dnu.size > 1 and np.max(np.abs(np.diff(dnu))) > _linewidth_estimate_hz(cfg) / 10:
        raise GridTooCoarse("detuning grid spacing exceeds linewidth/10")
    if not -cfg.length / 2 < z < cfg.length / 2:
        raise ValueError("membrane position must lie inside the cavity")
    optics = None if mem is None else membrane_slab_optics(mem, cfg.wavelength)
    return np.abs(_amplitude(cfg, optics, z, dnu)) ** 2


def _golden_max(f, a, b, tol):
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _half_max_crossing(f, peak, level, step, direction):
    g = lambda x: f(x) - level
    far = peak + direction * step
    while g(far) > 0:
        step *= 2
        far = peak + direction * step
    lo, hi = sorted((peak, far))
    return bisect(g, lo, hi, xtol=1e-9 * abs(far - peak), rtol=4 * np.finfo(float).eps)


def resonance_finesse(cfg, optics, z):
    """Locate the strongest transmission resonance in one FSR; return (finesse, peak_hz, peak_T)."""
    fsr = free_spectral_range(cfg)
    lw = _linewidth_estimate_hz(cfg)
    grid = np.arange(COARSE_POINTS_PER_FSR) * (fsr / COARSE_POINTS_PER_FSR)
    coarse = np.abs(_amplitude(cfg, optics, z, grid)) ** 2
    i = int(np.argmax(coarse))
    h = grid[1]
    power = lambda x: float(np.abs(_amplitude(cfg, optics, z, x)) ** 2)
    peak, peak_t = _golden_max(power, grid[i] - h, grid[i] + h, GOLDEN_TOL * lw)
    lo = _half_max_crossing(power, peak, peak_t / 2, lw / 4, -1)
    hi = _half_max_crossing(power, peak, peak_t / 2, lw / 4, +1)
    return fsr / (hi - lo), peak, peak_t


def finesse_scan(cfg, mem, z_grid, workers=None):
    """Coupled-cavity finesse F(z) = FSR / FWHM at each membrane position."""
    optics = None if mem is None else membrane_slab_optics(mem, cfg.wavelength)
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=float))
    return np.array(pmap(lambda z: resonance_finesse(cfg, optics, z)[0], z_grid, workers))
