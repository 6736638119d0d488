"""
How good is the reduced model?
==============================

The one-line transmissivity drops the lower optical sideband and flattens
the cavity response over the dip.  The exact linear solve keeps both.  The
gap between them is set by gamma / 2 omega_m.
"""

# %%
import numpy as np

from omitlab.constants import hz_to_angular
from omitlab.omit import (
    OmitParams, exact_response_oracle, optical_damping, sideband_response, transmissivity,
)


def params(ratio, gamma_opt=np.pi * 14.73, gamma_m=np.pi * 0.27):
    omega_m = hz_to_angular(402.7e3)
    g = omega_m / ratio
    return OmitParams(0.9 * g, 0.1 * g, 0.0, gamma_m, omega_m, 38.75e-12).with_gamma_opt(gamma_opt)


# %%
# Across the dip, compare the full solve, the upper-sideband-only solve and
# the reduced formula.
print(" omega_m/gamma   full-vs-reduced   upper-only-vs-reduced   gamma/2omega_m")
for ratio in (4.7, 10, 20, 50, 100):
    p = params(ratio)
    g = optical_damping(p)
    W = p.omega_m + np.linspace(-10 * g, 10 * g, 2001)
    t = transmissivity(p, W)
    full = np.max(np.abs(exact_response_oracle(p, W).t - t)) / p.t0
    upper = np.max(np.abs(sideband_response(p, W).t - t)) / p.t0
    print(f"{ratio:12.1f}   {full:15.4f}   {upper:21.4f}   {p.gamma / (2 * p.omega_m):14.4f}")

# %%
# The lower sideband dominates until the dip becomes a sizeable fraction of
# the cavity linewidth; then the flat-cavity assumption takes over.
