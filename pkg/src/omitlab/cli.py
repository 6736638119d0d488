"""Command-line front end.

Each subcommand writes one table (CSV with a metadata header, or JSON) into
the output directory.  Output depends only on the config and seed, so
identical runs produce identical bytes.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 precondition
violation.
"""
import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import cavity as cav
from . import membrane as mech
from . import omit
from .config import load_config
from .constants import CONSTANTS, TWO_PI, angular_to_hz, mbar_to_pa
from .detection import SignalSource, ellipse_monte_carlo, task_rng
from .errors import OmitlabError, ValidationError

COMMANDS = (
    "response-sweep", "linewidth-vs-power", "finesse-scan", "ellipse",
    "oracle-compare", "design-check", "gas-damping",
)


def derive_params(cfg, power=None):
    """Reduced OMIT parameters for the configured apparatus at control ``power`` (W).

    Returns ``(params, g0)``.  G0 comes from the membrane position, unless
    ``control.calibrate_fwhm_hz`` is set: then G0 is scaled so the highest
    configured power gives that FWHM.
    """
    g1, g2 = cav.mirror_coupling_rates(cfg.cavity)
    optics = cav.membrane_slab_optics(cfg.membrane, cfg.cavity.wavelength)
    g0 = abs(cav.coupling_constant(cfg.membrane_z, abs(optics.r_m), cfg.cavity))
    base = omit.OmitParams(
        gamma1=g1, gamma2=g2, g_bar=0.0,
        gamma_m=mech.mechanical_halfwidth(cfg.membrane, cfg.gas),
        omega_m=cfg.membrane.omega_m, m_eff=mech.effective_mass(cfg.membrane),
        delta=cfg.control.delta,
    )
    if cfg.control.calibrate_fwhm_hz is not None:
        g0 = omit.g0_for_linewidth(base, max(cfg.control.powers), cfg.control.calibrate_fwhm_hz,
                                   carrier_frequency(cfg))
    power = cfg.control.power if power is None else power
    a = omit.intracavity_amplitude(power, carrier_frequency(cfg), base.Delta, g1, base.gamma)
    return replace(base, g_bar=float(g0 * a)), g0


def carrier_frequency(cfg):
    return TWO_PI * CONSTANTS.c / cfg.cavity.wavelength


def sweep_offsets(sweep, linewidth_hz=None, max_refined=20001):
    """Sweep offsets (Hz): a uniform grid plus min_step refinement within two linewidths of zero.

    No two returned points are closer than ``min_step_hz``.
    """
    grid = np.linspace(sweep.start_hz, sweep.stop_hz, sweep.points)
    if linewidth_hz:
        half = min(2 * linewidth_hz, sweep.min_step_hz * (max_refined - 1) / 2)
        n = int(np.floor(half / sweep.min_step_hz))
        fine = np.arange(-n, n + 1) * sweep.min_step_hz
        fine = fine[(fine >= sweep.start_hz) & (fine <= sweep.stop_hz)]
        grid = np.concatenate([grid, fine])
    grid = np.unique(grid)
    keep = [grid[0]]
    for f in grid[1:]:
        if f - keep[-1] >= sweep.min_step_hz * (1 - 1e-9):
            keep.append(f)
    return np.array(keep)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_table(path, columns, meta, fmt):
    names = list(columns)
    cols = [columns[n] if isinstance(columns[n], (list, tuple)) else np.atleast_1d(columns[n])
            for n in names]
    if fmt == "json":
        doc = {"meta": meta, "columns": {n: [float(x) for x in c] for n, c in zip(names, cols)}}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# {k}: {meta[k]}" for k in sorted(meta)]
        lines.append(",".join(names))
        for row in zip(*cols):
            lines.append(",".join(_fmt(x) for x in row))
        text = "\n".join(lines) + "\n"
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


class Context:
    def __init__(self, cfg, args):
        self.cfg = cfg
        self.out = args.out or cfg.output_path
        self.fmt = args.format or cfg.output_format
        self.seed = cfg.noise.seed if args.seed is None else args.seed
        self.quiet = args.quiet
        self.command = args.command

    def meta(self, **extra):
        m = {"command": self.command, "config_sha256": self.cfg.digest, "seed": self.seed}
        m.update(extra)
        return m

    def emit(self, name, columns, **extra):
        os.makedirs(self.out, exist_ok=True)
        path = os.path.join(self.out, f"{name}.{self.fmt}")
        write_table(path, columns, self.meta(**extra), self.fmt)
        self.say(f"wrote {path}")
        return path

    def say(self, msg):
        if not self.quiet:
            print(msg)


def cmd_response_sweep(ctx):
    p, _ = derive_params(ctx.cfg)
    fwhm = (p.gamma_m + omit.optical_damping(p)) / np.pi
    df = sweep_offsets(ctx.cfg.sweep, fwhm)
    cols = omit.response_sweep(p, p.omega_m + TWO_PI * df)
    cols = {"df_Hz": df, **cols}
    ctx.say(f"Gamma_opt = 2pi x {angular_to_hz(omit.optical_damping(p)):.4g} Hz, FWHM = {fwhm:.4g} Hz")
    ctx.emit("response_sweep", cols, gamma_opt_rad_s=repr(omit.optical_damping(p)))


def cmd_linewidth_vs_power(ctx):
    cfg = ctx.cfg
    p, g0 = derive_params(cfg, power=0.0)
    powers = np.array(cfg.control.powers)
    sweep = omit.linewidth_vs_power_sweep(p, powers, g0, carrier_frequency(cfg))
    for P, w in zip(sweep.power, sweep.fwhm_hz):
        ctx.say(f"P = {P * 1e3:.3g} mW  FWHM = {w:.4g} Hz")
    ctx.emit("linewidth_vs_power", sweep.as_columns(), g0_rad_s_m=repr(float(g0)))


def cmd_finesse_scan(ctx):
    cfg = ctx.cfg
    z = np.linspace(0, cfg.cavity.wavelength / 2, cfg.sweep.z_points, endpoint=False)
    F = cav.finesse_scan(cfg.cavity, cfg.membrane, z)
    ctx.say(f"finesse range {F.min():.1f} .. {F.max():.1f}")
    ctx.emit("finesse_scan", {"z_m": z, "finesse": F,
                              "gamma_rad_s": cav.coupled_linewidth(F, cfg.cavity)})


def cmd_ellipse(ctx):
    cfg = ctx.cfg
    p, _ = derive_params(cfg)
    nz = cfg.noise
    df = np.linspace(cfg.sweep.start_hz, cfg.sweep.stop_hz, cfg.sweep.ellipse_points)
    rows = []
    for k, f in enumerate(df):
        src = SignalSource(nz.drive_amplitude, nz.beta, p.omega_m + TWO_PI * f,
                           nz.amplitude_noise_sigma, ctx.seed, nz.phase_noise_sigma)
        ell = ellipse_monte_carlo(src, p, src.drive_frequency, nz.n_samples, rng=task_rng(ctx.seed, k))
        d = ell.to_dict()
        d.pop("seed")
        rows.append({"df_Hz": f, "theta_closed_form_rad": float(omit.rotation_angle(p, src.drive_frequency)),
                     **d})
    cols = {k: [r[k] for r in rows] for k in rows[0]}
    ctx.emit("ellipse", cols)


def cmd_oracle_compare(ctx):
    p, _ = derive_params(ctx.cfg)
    fwhm = (p.gamma_m + omit.optical_damping(p)) / np.pi
    df = sweep_offsets(ctx.cfg.sweep, fwhm)
    W = p.omega_m + TWO_PI * df
    exact = omit.exact_response_oracle(p, W)
    reduced = omit.transmissivity(p, W)
    dev = np.abs(exact.t - reduced) / p.t0
    ctx.say(f"omega_m/gamma = {p.omega_m / p.gamma:.3g}; max |t_exact - t_reduced|/t0 = {dev.max():.3e}")
    ctx.emit("oracle_compare", {
        "df_Hz": df, "re_t_exact": exact.t.real, "im_t_exact": exact.t.imag,
        "re_t_reduced": reduced.real, "im_t_reduced": reduced.imag, "deviation_over_t0": dev,
    }, max_deviation=repr(float(dev.max())))


def cmd_design_check(ctx):
    cfg = ctx.cfg
    g = cfg.control.design_gamma_opt
    threshold = omit.feasibility_threshold(g)
    q = mech.quality_factor(cfg.membrane, cfg.gas)
    ok, ratio = omit.feasibility_bound(cfg.gas.temperature, q, g)
    ctx.say(f"T/Q_m threshold at Gamma_opt = 2pi x {angular_to_hz(g):.4g} Hz: {threshold:.3g} K")
    ctx.say(f"this apparatus: T/Q_m = {cfg.gas.temperature / q:.3g} K -> "
            f"{'satisfied' if ok else 'not satisfied'} (ratio {ratio:.3g})")
    ctx.emit("design_check", {"gamma_opt_rad_s": [g], "threshold_K": [threshold],
                              "T_over_Q_K": [cfg.gas.temperature / q], "ratio": [ratio],
                              "satisfied": [ok]})


def cmd_gas_damping(ctx):
    cfg = ctx.cfg
    lo, hi = cfg.scan_mbar
    p_mbar = np.geomspace(lo, hi, cfg.sweep.points)
    gas = [replace(cfg.gas, pressure=mbar_to_pa(x)) for x in p_mbar]
    rate = np.array([mech.gas_damping_rate(cfg.membrane, g) for g in gas])
    q = np.array([mech.quality_factor(cfg.membrane, g) for g in gas])
    ctx.say(f"Q from {q[0]:.4g} at {lo:g} mbar to {q[-1]:.4g} at {hi:g} mbar")
    ctx.emit("gas_damping", {"pressure_mbar": p_mbar, "gamma_gas_rad_s": rate, "Q": q})


HANDLERS = {
    "response-sweep": cmd_response_sweep,
    "linewidth-vs-power": cmd_linewidth_vs_power,
    "finesse-scan": cmd_finesse_scan,
    "ellipse": cmd_ellipse,
    "oracle-compare": cmd_oracle_compare,
    "design-check": cmd_design_check,
    "gas-damping": cmd_gas_damping,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="omitlab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", metavar="PATH", help="INI file layered over the bundled defaults")
    ap.add_argument("--out", metavar="DIR", help="output directory")
    ap.add_argument("--seed", type=int, help="override noise.seed")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--points", type=int, help="override sweep.points")
    ap.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.points is not None:
            if args.points < 2:
                raise ValidationError("--points must be >= 2")
            cfg = replace(cfg, sweep=replace(cfg.sweep, points=args.points),
                          values={**cfg.values, "sweep": {**cfg.values["sweep"], "points": str(args.points)}})
        HANDLERS[args.command](Context(cfg, args))
    except OmitlabError as e:
        print(f"omitlab {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"omitlab {args.command}: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
