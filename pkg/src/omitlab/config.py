"""Run configuration: a sectioned INI file layered over the bundled defaults."""
import configparser
import hashlib
import re
from dataclasses import dataclass
from importlib import resources

from .cavity import CavityConfig
from .constants import hz_to_angular, mbar_to_pa
from .errors import ParseError, ValidationError
from .membrane import GasEnvironment, MembraneConfig


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _optional_float(text):
    return float(text) if text.strip() else None


SCHEMA = {
    "cavity": {
        "length_m": float, "T1": float, "T2": float, "wavelength_m": float,
        "excess_loss": float, "membrane_z_m": float,
    },
    "membrane": {
        "side_length_m": float, "thickness_m": float, "density_kg_m3": float,
        "refractive_index": complex, "f_m_hz": float, "q_intrinsic": float,
    },
    "gas": {
        "pressure_mbar": float, "temperature_K": float, "molar_mass_kg_mol": float,
        "scan_min_mbar": float, "scan_max_mbar": float,
    },
    "control": {
        "power_W": float, "delta_rad_s": float, "powers_W": _floats,
        "calibrate_fwhm_hz": _optional_float, "design_gamma_opt_hz": float,
    },
    "sweep": {
        "start_hz": float, "stop_hz": float, "points": int, "min_step_hz": float,
        "z_points": int, "ellipse_points": int,
    },
    "noise": {
        "drive_amplitude_V": float, "beta_rad_per_V": float, "amplitude_noise_sigma": float,
        "phase_noise_sigma": float, "n_samples": int, "seed": int, "sigma_det": float,
    },
    "output": {"path": str, "format": str},
}


@dataclass(frozen=True)
class ControlSettings:
    power: float
    delta: float
    powers: tuple
    calibrate_fwhm_hz: float
    design_gamma_opt: float  # rad/s


@dataclass(frozen=True)
class SweepSettings:
    start_hz: float
    stop_hz: float
    points: int
    min_step_hz: float
    z_points: int
    ellipse_points: int


@dataclass(frozen=True)
class NoiseSettings:
    drive_amplitude: float
    beta: float
    amplitude_noise_sigma: float
    phase_noise_sigma: float
    n_samples: int
    seed: int
    sigma_det: float


@dataclass(frozen=True)
class RunConfig:
    cavity: CavityConfig
    membrane: MembraneConfig
    gas: GasEnvironment
    membrane_z: float
    control: ControlSettings
    sweep: SweepSettings
    noise: NoiseSettings
    output_path: str
    output_format: str
    scan_mbar: tuple
    values: dict  # resolved raw strings, used for hashing

    @property
    def digest(self):
        canon = "\n".join(f"{s}.{k}={v}" for s in sorted(self.values)
                          for k, v in sorted(self.values[s].items()))
        return hashlib.sha256(canon.encode()).hexdigest()


_KEY_RE = re.compile(r"^\s*([^=:\s][^=:]*?)\s*[=:]")
_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")


def _line_index(text):
    """Map (section, key) to its line number."""
    where, section = {}, None
    for n, line in enumerate(text.splitlines(), 1):
        if line.lstrip().startswith(("#", ";")) or not line.strip():
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip()
            where[(section, None)] = n
            continue
        m = _KEY_RE.match(line)
        if m and section is not None:
            where[(section, m.group(1))] = n
    return where


def _read(text, source):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as e:
        raise ParseError("key outside any [section]", e.lineno) from None
    except configparser.ParsingError as e:
        lineno, line = e.errors[0]
        raise ParseError(f"cannot parse {line.strip()!r}", lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as e:
        raise ParseError(str(e).split(": ", 1)[-1], e.lineno) from None
    lines = _line_index(text)
    values = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ParseError(f"unknown section [{section}]", lines.get((section, None)))
        values[section] = {}
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                raise ParseError(f"unknown key {key!r} in [{section}]", lines.get((section, key)))
            values[section][key] = (raw, lines.get((section, key)))
    return values


def default_text():
    return resources.files("omitlab").joinpath("default.ini").read_text()


def load_config(path=None, text=None):
    """Load a config file (or text) on top of the bundled defaults and validate it.

    Raises
    ------
    ParseError
        For syntax errors, unknown sections or keys, and unparseable values.
    ValidationError
        When a value violates a physical invariant.
    """
    merged = _read(default_text(), "<default>")
    if path is not None:
        with open(path) as fh:
            text = fh.read()
    if text is not None:
        for section, items in _read(text, str(path or "<text>")).items():
            merged.setdefault(section, {}).update(items)

    parsed = {}
    for section, keys in SCHEMA.items():
        parsed[section] = {}
        for key, conv in keys.items():
            raw, lineno = merged[section][key]
            try:
                parsed[section][key] = conv(raw.replace(" ", "").replace("i", "j") if conv is complex else raw)
            except ValueError:
                raise ParseError(f"bad value {raw!r} for {section}.{key}", lineno) from None
    resolved = {s: {k: v[0] for k, v in items.items()} for s, items in merged.items()}
    return _build(parsed, resolved)


def _build(v, resolved):
    c, m, g, ctl, sw, nz, out = (v[s] for s in SCHEMA)
    cavity = CavityConfig(c["length_m"], c["T1"], c["T2"], c["wavelength_m"], c["excess_loss"])
    membrane = MembraneConfig(
        m["side_length_m"], m["thickness_m"], hz_to_angular(m["f_m_hz"]), m["q_intrinsic"],
        m["density_kg_m3"], m["refractive_index"],
    )
    gas = GasEnvironment(mbar_to_pa(g["pressure_mbar"]), g["temperature_K"], g["molar_mass_kg_mol"])
    if not abs(c["membrane_z_m"]) < c["length_m"] / 2:
        raise ValidationError("membrane_z_m must lie inside the cavity")
    if not 0 < g["scan_min_mbar"] < g["scan_max_mbar"]:
        raise ValidationError("gas scan range must satisfy 0 < scan_min_mbar < scan_max_mbar")
    if ctl["power_W"] < 0 or any(p <= 0 for p in ctl["powers_W"]) or not ctl["powers_W"]:
        raise ValidationError("control powers must be positive")
    if not ctl["design_gamma_opt_hz"] > 0:
        raise ValidationError("design_gamma_opt_hz must be > 0")
    if sw["points"] < 2:
        raise ValidationError("sweep.points must be >= 2")
    if not sw["stop_hz"] > sw["start_hz"]:
        raise ValidationError("sweep.stop_hz must exceed sweep.start_hz")
    if not sw["min_step_hz"] > 0:
        raise ValidationError("sweep.min_step_hz must be > 0")
    if sw["z_points"] < 2 or sw["ellipse_points"] < 1:
        raise ValidationError("sweep.z_points must be >= 2 and ellipse_points >= 1")
    if nz["amplitude_noise_sigma"] < 0 or nz["phase_noise_sigma"] < 0 or nz["sigma_det"] < 0:
        raise ValidationError("noise sigmas must be >= 0")
    if nz["n_samples"] < 1000:
        raise ValidationError("noise.n_samples must be >= 1000")
    if out["format"] not in ("csv", "json"):
        raise ValidationError("output.format must be csv or json")
    return RunConfig(
        cavity=cavity, membrane=membrane, gas=gas, membrane_z=c["membrane_z_m"],
        control=ControlSettings(ctl["power_W"], ctl["delta_rad_s"], ctl["powers_W"],
                                ctl["calibrate_fwhm_hz"], hz_to_angular(ctl["design_gamma_opt_hz"])),
        sweep=SweepSettings(**sw),
        noise=NoiseSettings(nz["drive_amplitude_V"], nz["beta_rad_per_V"], nz["amplitude_noise_sigma"],
                            nz["phase_noise_sigma"], nz["n_samples"], nz["seed"], nz["sigma_det"]),
        output_path=out["path"], output_format=out["format"],
        scan_mbar=(g["scan_min_mbar"], g["scan_max_mbar"]),
        values=resolved,
    )
