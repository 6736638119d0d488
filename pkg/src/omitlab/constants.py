"""Physical constants and unit helpers.

Internally every frequency is angular (rad/s) and everything else is SI.
Conversion to Hz or mbar happens only at the human I/O boundary.
"""
from dataclasses import dataclass

import numpy as np
from scipy import constants as _codata


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = _codata.c
    hbar: float = _codata.hbar
    k_B: float = _codata.k
    R_gas: float = _codata.R


CONSTANTS = PhysicalConstants()

MBAR = 100.0  # Pa per mbar
TWO_PI = 2.0 * np.pi


def hz_to_angular(f):
    return TWO_PI * f


def angular_to_hz(omega):
    return omega / TWO_PI


def mbar_to_pa(p_mbar):
    return p_mbar * MBAR


def pa_to_mbar(p_pa):
    return p_pa / MBAR
