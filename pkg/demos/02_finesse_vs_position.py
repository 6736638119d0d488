"""
Finesse of a membrane-in-the-middle cavity
==========================================

The empty 85 mm cavity has a finesse near 22400.  Sliding the membrane
through half a wavelength changes how the light is shared between the two
sub-cavities, and with it the linewidth.
"""

# %%
import numpy as np

from omitlab.cavity import (
    CavityConfig, coupled_linewidth, coupling_constant, finesse_scan, membrane_slab_optics,
    resonance_finesse,
)
from omitlab.constants import angular_to_hz, hz_to_angular
from omitlab.membrane import MembraneConfig

cav = CavityConfig(0.085, 245.1e-6, 16.93e-6, 1064e-9, excess_loss=18.4e-6)
mem = MembraneConfig(1e-3, 50e-9, hz_to_angular(402.7e3), 1.5e6)
F0, _, T0 = resonance_finesse(cav, None, 0.0)
print(f"empty cavity: finesse {F0:.0f}, peak transmission {T0:.3f}")

# %%
# The membrane is a weak mirror: about 15% power reflection at 1064 nm.
opt = membrane_slab_optics(mem, cav.wavelength)
print(f"|r_m|^2 = {abs(opt.r_m) ** 2:.4f}, absorption = {opt.absorption:.2e}")

# %%
# Scan half a wavelength.  With T1 much larger than T2 the mode can settle on
# the low-loss side, so F(z) climbs above the empty value at some positions.
z = np.linspace(0, cav.wavelength / 2, 16, endpoint=False)
F = finesse_scan(cav, mem, z)
for zi, fi in zip(z, F):
    print(f"z = {zi * 1e9:6.1f} nm   F = {fi:8.0f}   FWHM = "
          f"{2 * angular_to_hz(coupled_linewidth(fi, cav)) / 1e3:6.1f} kHz")

# %%
# The coupling constant G0 = d omega_c / dz peaks between the nodes.
G0 = coupling_constant(z, abs(opt.r_m), cav)
print(f"max |G0| = 2pi x {angular_to_hz(np.max(np.abs(G0))) * 1e-9 / 1e6:.2f} MHz per nm")
