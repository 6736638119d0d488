"""Linewidth extraction and Lorentzian dip fitting on sampled spectra (frequencies in Hz)."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .errors import DipNotResolved, NoConvergence

MIN_DIP_SAMPLES = 20


def _crossing(freq, y, model, level, i, j):
    """Frequency where the curve crosses ``level`` between samples i and j."""
    f0, f1, y0, y1 = freq[i], freq[j], y[i], y[j]
    if model is None:
        return f0 + (level - y0) * (f1 - f0) / (y1 - y0)
    return bisect(lambda f: model(f) - level, f0, f1, xtol=1e-12 * abs(f1 - f0) + 1e-300,
                  rtol=4 * np.finfo(float).eps)


def extract_fwhm(freq, power, model=None, baseline=1.0):
    """Full width (Hz) of a transmission dip at half depth.

    The half-depth level is midway between ``baseline`` and the dip minimum.
    Crossings are bracketed on the samples and then located by bisection on
    ``model`` (a callable of frequency) when given, else by linear
    interpolation between the bracketing samples.

    Raises
    ------
    DipNotResolved
        If fewer than 20 samples lie inside the half-depth band.
    """
    freq = np.asarray(freq, dtype=float)
    y = np.asarray(power, dtype=float)
    k = int(np.argmin(y))
    y_min = y[k]
    if model is not None and 0 < k < len(y) - 1:
        res = minimize_scalar(model, bounds=(freq[k - 1], freq[k + 1]), method="bounded",
                              options={"xatol": 1e-9 * (freq[k + 1] - freq[k - 1])})
        y_min = min(y_min, float(res.fun))
    level = (baseline + y_min) / 2
    inside = y < level
    if baseline - y_min <= 0 or np.count_nonzero(inside) < MIN_DIP_SAMPLES:
        raise DipNotResolved(f"only {np.count_nonzero(inside)} samples inside the dip")
    lo = k
    while lo > 0 and y[lo - 1] < level:
        lo -= 1
    hi = k
    while hi < len(y) - 1 and y[hi + 1] < level:
        hi += 1
    if lo == 0 or hi == len(y) - 1:
        raise DipNotResolved("dip extends past the sampled band")
    left = _crossing(freq, y, model, level, lo - 1, lo)
    right = _crossing(freq, y, model, level, hi, hi + 1)
    return right - left


def lorentzian_dip(f, center, fwhm, depth):
    hw2 = (fwhm / 2) ** 2
    return 1.0 - depth * hw2 / ((f - center) ** 2 + hw2)


@dataclass
class LorentzianFit:
    center: float
    fwhm: float
    depth: float
    residual: float
    stderr: np.ndarray
    iterations: int
    well_determined: bool


def _initial_guess(f, y):
    k = int(np.argmin(y))
    depth = 1.0 - y[k]
    level = 1.0 - depth / 2
    below = np.nonzero(y < level)[0]
    if depth > 0 and below.size >= 2:
        width = f[below[-1]] - f[below[0]]
    else:
        width = 0.0
    if width <= 0:
        width = (f[-1] - f[0]) / 10
    return f[k], width, depth


def _jacobian(u, center, fwhm, depth):
    hw = fwhm / 2
    d = (u - center) ** 2 + hw**2
    shape = hw**2 / d
    J = np.empty((u.size, 3))
    J[:, 0] = -depth * hw**2 * 2 * (u - center) / d**2
    J[:, 1] = -depth * (hw / d - hw**3 / d**2)
    J[:, 2] = -shape
    return J


def fit_lorentzian(freq, y, max_iter=200, xtol=1e-10):
    """Least-squares fit of 1 - D (G/2)^2 / ((f - f0)^2 + (G/2)^2) by Levenberg-Marquardt.

    Returns a :class:`LorentzianFit` with centre and FWHM in Hz, the depth,
    the RMS residual and standard errors from the curvature matrix.
    ``well_determined`` is False when that matrix is near singular, as for a
    flat trace with no dip.

    Raises
    ------
    NoConvergence
        After ``max_iter`` iterations; the exception's ``last`` holds the last iterate.
    """
    f = np.asarray(freq, dtype=float)
    y = np.asarray(y, dtype=float)
    if f.size < 3:
        raise ValueError("need at least three samples")
    ref = float(f[np.argmin(y)])
    u = f - ref  # centred axis keeps the normal equations well scaled
    c0, w0, d0 = _initial_guess(f, y)
    theta = np.array([c0 - ref, w0, d0])

    def residual(th):
        return y - lorentzian_dip(u, *th)

    r = residual(theta)
    cost = r @ r
    lam = 1e-3
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = _jacobian(u, *theta)
        JtJ = J.T @ J
        g = J.T @ r
        diag = np.diag(JtJ).copy()
        diag[diag == 0] = 1.0
        while True:
            try:
                step = np.linalg.solve(JtJ + lam * np.diag(diag), g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            trial = theta + step
            trial[1] = abs(trial[1])
            r_new = residual(trial)
            cost_new = r_new @ r_new
            if cost_new <= cost:
                lam = max(lam / 10, 1e-12)
                break
            lam *= 10
            if lam > 1e12:
                step = np.zeros(3)
                trial, r_new, cost_new = theta, r, cost
                break
        scale = np.array([abs(theta[1]), abs(theta[1]), 1.0])
        small = np.all(np.abs(step) <= xtol * (np.abs(theta) + scale))
        theta, r, cost = trial, r_new, cost_new
        if small or cost == 0:
            converged = True
            break

    J = _jacobian(u, *theta)
    JtJ = J.T @ J
    dof = max(f.size - 3, 1)
    s2 = cost / dof
    cond = np.linalg.cond(JtJ)
    if np.isfinite(cond) and cond < 1e12:
        stderr = np.sqrt(np.abs(np.diag(np.linalg.inv(JtJ))) * s2)
    else:
        stderr = np.full(3, np.inf)
    well = bool(np.all(np.isfinite(stderr)) and theta[2] > 0 and stderr[1] < 0.5 * abs(theta[1]))
    fit = LorentzianFit(theta[0] + ref, abs(theta[1]), theta[2], float(np.sqrt(cost / f.size)),
                        stderr, it, well)
    if not converged:
        raise NoConvergence(f"no convergence after {max_iter} iterations", last=fit)
    return fit
