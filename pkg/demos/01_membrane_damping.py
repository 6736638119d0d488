"""
Membrane mass, damping and quality factor
=========================================

A 1 mm x 1 mm x 50 nm silicon nitride drum at 402.7 kHz.  We work out its
effective mass, then watch residual gas pull the quality factor down.
"""

# %%
# The fundamental drum mode carries a quarter of the physical mass.
import numpy as np

from omitlab.constants import hz_to_angular, mbar_to_pa
from omitlab.membrane import (
    GasEnvironment, MembraneConfig, effective_mass, gas_damping_rate, mechanical_halfwidth,
    quality_factor, ringdown_q, thermal_force_psd,
)

mem = MembraneConfig(1e-3, 50e-9, hz_to_angular(402.7e3), q_intrinsic=1.5e6)
print(f"effective mass: {effective_mass(mem) * 1e12:.2f} ng")

# %%
# Gas damping grows linearly with pressure in the free-molecular regime.
# Around 1e-4 mbar it starts to compete with the intrinsic loss.
for p_mbar in np.geomspace(1e-7, 1e-2, 11):
    env = GasEnvironment(mbar_to_pa(p_mbar))
    print(f"{p_mbar:8.1e} mbar   gamma_gas = {gas_damping_rate(mem, env):9.3e} rad/s   "
          f"Q = {quality_factor(mem, env):9.4g}")

# %%
# A ringdown measurement reads Q back from the amplitude decay time.
env = GasEnvironment(0.0)
tau = 1 / mechanical_halfwidth(mem, env)
print(f"amplitude ringdown time {tau:.3f} s  ->  Q = {ringdown_q(402.7e3, tau):.4g}")

# %%
# The thermal force noise is tiny, about 1e-30 N^2/Hz at room temperature.
print(f"thermal force PSD: {thermal_force_psd(mem, env):.2e} N^2/Hz")
