"""Optomechanically induced transparency in a membrane-in-the-middle filter cavity."""
from .cavity import (
    CavityConfig, coupled_linewidth, coupling_constant, finesse_scan, free_spectral_range,
    membrane_slab_optics, mirror_coupling_rates, resonance_finesse, transmission_spectrum,
)
from .config import load_config
from .constants import CONSTANTS, angular_to_hz, hz_to_angular, mbar_to_pa, pa_to_mbar
from .detection import (
    NoiseEllipse, SignalSource, beat_signal, demodulate, ellipse_monte_carlo,
    full_chain_sweep, propagate_ellipse_closed_form,
)
from .errors import (
    ConfigError, NumericalError, OmitlabError, PreconditionError,
)
from .lineshape import extract_fwhm, fit_lorentzian
from .membrane import (
    GasEnvironment, MembraneConfig, effective_mass, gas_damping_rate, quality_factor, ringdown_q,
)
from .omit import (
    OmitParams, exact_response_oracle, feasibility_bound, group_delay, linewidth_vs_power_sweep,
    optical_damping, phase_response, rotation_angle, transmissivity,
)

__version__ = "0.1.0"
