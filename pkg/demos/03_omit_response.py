"""
The transparency window
=======================

A control beam on the red sideband turns the membrane into a narrow
absorber for a weak signal.  Here we look at the amplitude, phase, noise
ellipse angle and group delay across the feature.
"""

# %%
import numpy as np

from omitlab.constants import hz_to_angular
from omitlab.omit import OmitParams, optical_damping, response_sweep

omega_m = hz_to_angular(402.7e3)
gamma = hz_to_angular(85e3)  # 170 kHz full cavity linewidth
eta = 245.1 / (245.1 + 16.93)
p = OmitParams(eta * gamma, (1 - eta) * gamma, 0.0, np.pi * 0.27, omega_m, 38.75e-12)
p = p.with_gamma_opt(np.pi * 14.73)  # 15 Hz FWHM
print(f"t0 = {p.t0:.3f}, Gamma_opt / gamma_m = {optical_damping(p) / p.gamma_m:.1f}")

# %%
# Sweep the signal across the mechanical resonance.
df = np.array([-60, -20, -7.5, -2, -0.5, 0, 0.5, 2, 7.5, 20, 60.0])
cols = response_sweep(p, omega_m + hz_to_angular(df))
print("  df/Hz   |t|/t0   phase/deg  theta/deg  delay/ms")
for i, f in enumerate(df):
    print(f"{f:7.1f}  {cols['abs_t'][i] / p.t0:7.4f}  {np.degrees(cols['phase_rad'][i]):9.2f}  "
          f"{np.degrees(cols['theta_rad'][i]):9.2f}  {cols['group_delay_s'][i] * 1e3:8.2f}")

# %%
# On resonance the group delay is negative: the pulse comes out early.
print(f"advance at resonance: {-cols['group_delay_s'][5] * 1e3:.0f} ms")
