"""
Rotating a noise ellipse and reading it out
===========================================

The signal sideband carries extra amplitude noise, so its noise ellipse
lies along the amplitude axis.  Passing through the transparency window
rotates it.  A lock-in on the beat note recovers the phase.
"""

# %%
import numpy as np

from omitlab.constants import TWO_PI, hz_to_angular
from omitlab.detection import SignalSource, ellipse_monte_carlo, full_chain_sweep, task_rng
from omitlab.omit import OmitParams, rotation_angle

omega_m = hz_to_angular(402.7e3)
gamma = omega_m / 20
p = OmitParams(0.9 * gamma, 0.1 * gamma, 0.0, np.pi * 0.27, omega_m, 38.75e-12)
p = p.with_gamma_opt(np.pi * 14.73)
src = SignalSource(drive_amplitude=1.0, beta=0.015, amplitude_noise_sigma=0.1, seed=7)

# %%
# Monte Carlo ellipse angle against the closed form.
print("  df/Hz   theta_MC/deg   theta/deg")
for k, df in enumerate([-40, -10, -2, 0, 2, 10, 40.0]):
    W = omega_m + TWO_PI * df
    e = ellipse_monte_carlo(src, p, W, 100_000, rng=task_rng(src.seed, k))
    print(f"{df:7.1f}   {np.degrees(e.angle):12.3f}   {np.degrees(rotation_angle(p, W)):9.3f}")

# %%
# Full chain: synthesize the beat note, demodulate, compare.
W = omega_m + TWO_PI * np.array([-20.0, -3.0, 3.0, 20.0])
cols = full_chain_sweep(src, p, W, 5000, periods=200)
for f, ph, th in zip(cols["f_Hz"], cols["phase_rad"], cols["theta_deg"]):
    print(f"{f - 402.7e3:6.1f} Hz   lock-in phase {np.degrees(ph):8.3f} deg   ellipse {th:8.3f} deg")
