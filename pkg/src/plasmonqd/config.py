"""Run configuration: an INI-like text format with mandatory units.

Example::

    [material]
    preset = silver-drude
    eps_b = 3.0

    [geometry]
    r = 30 nm
    s = 30 nm

    [drive]
    intensity = 10 W/cm2

    [run]
    N = 10

Dimensional values carry a unit suffix. Frequencies given in Hz-type units
are converted to angular frequency (multiplied by 2 pi); ``eV`` maps to
``E / hbar``. Dimensionless values (``eps_b``, ``delta``, ``N``, the
``t_min``/``t_max`` multiples of 1/gamma_a, ...) take no unit.
"""

import dataclasses
import hashlib
import json
import math
import re
from dataclasses import dataclass

from .constants import ev_to_rad_s
from .effective import CROSS_PARITIES
from .errors import ConfigError
from .lindblad import ENGINES
from .material import NEGATIVE_POLICIES, PRESETS, RESPONSE_KINDS

_LENGTH = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12}
_TWO_PI = 2.0 * math.pi
_RATE = {
    "rad/s": 1.0,
    "Hz": _TWO_PI,
    "kHz": _TWO_PI * 1e3,
    "MHz": _TWO_PI * 1e6,
    "GHz": _TWO_PI * 1e9,
    "THz": _TWO_PI * 1e12,
    "PHz": _TWO_PI * 1e15,
    "meV": ev_to_rad_s(1e-3),
    "eV": ev_to_rad_s(1.0),
}
_INTENSITY = {"W/m2": 1.0, "W/cm2": 1e4, "mW/cm2": 10.0, "kW/cm2": 1e7, "MW/cm2": 1e10}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15}
_SPEED = {"m/s": 1.0, "km/s": 1e3}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")

ANALYSES = ("both", "dipole", "multipole")
INITIAL_STATES = ("gg", "eg")
WORKERS_ENV = "PLASMONQD_WORKERS"


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration, SI units throughout."""

    # material
    preset: str = "silver-drude"
    omega_p: float = None
    gamma_p: float = None
    eps_inf: float = None
    v_f: float = None
    eps_b: float = 3.0
    # geometry
    r: float = 30e-9
    r0: float = 0.8e-9
    s: float = 30e-9
    s_min: float = 5e-9
    s_max: float = 95e-9
    s_points: int = 31
    r_min: float = 5e-9
    r_max: float = 95e-9
    r_points: int = 31
    # drive
    intensity: float = 1e5
    #: None means resonant with the dipolar LSPR of the chosen response
    frequency: float = None
    # qubits
    gamma: float = _TWO_PI * 1e8
    delta: float = 1e-5
    # run
    n_modes: int = 10
    analysis: str = "both"
    response: str = "nonlocal"
    initial_state: str = "gg"
    t_points: int = 400
    #: bare numbers are multiples of 1/gamma_a; see t_absolute
    t_min: float = 1e-4
    t_max: float = 50.0
    t_absolute: bool = False
    engine: str = "propagator"
    workers: int = 1
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    output: str = None
    radiative_damping: bool = False
    cross_parity: str = "axial"
    negative_correction: str = "clamp"

    @property
    def analyses(self):
        """(label, N) pairs to run, dipole first."""
        if self.analysis == "dipole":
            return [("dipole", 1)]
        if self.analysis == "multipole":
            return [("multipole", self.n_modes)]
        return [("dipole", 1), ("multipole", self.n_modes)]

    def material(self):
        from .material import material_preset

        overrides = {
            k: getattr(self, k) for k in ("omega_p", "gamma_p", "eps_inf", "v_f") if getattr(self, k) is not None
        }
        return material_preset(self.preset, eps_b=self.eps_b, **overrides)

    def as_dict(self):
        return dataclasses.asdict(self)

    def digest(self):
        """SHA-256 of the canonical JSON form of the configuration."""
        text = json.dumps(self.as_dict(), sort_keys=True, allow_nan=True)
        return hashlib.sha256(text.encode()).hexdigest()

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def _quantity(table, kind):
    def parse(text, key, line):
        m = _NUMBER.match(text)
        if not m:
            raise ConfigError(f"{key}: cannot parse {text!r} as a number with a unit", line, key)
        value, unit = float(m.group(1)), m.group(2)
        if not unit:
            raise ConfigError(f"{key}: missing unit, expected a {kind} unit ({', '.join(table)})", line, key)
        if unit not in table:
            raise ConfigError(f"{key}: unknown {kind} unit {unit!r} ({', '.join(table)})", line, key)
        return value * table[unit]

    return parse


def _plain(cast):
    def parse(text, key, line):
        m = _NUMBER.match(text)
        if not m or m.group(2):
            raise ConfigError(f"{key}: expected a dimensionless number, got {text!r}", line, key)
        value = float(m.group(1))
        if cast is int:
            if value != int(value):
                raise ConfigError(f"{key}: expected an integer, got {text!r}", line, key)
            return int(value)
        return value

    return parse


def _choice(options):
    def parse(text, key, line):
        if text not in options:
            raise ConfigError(f"{key}: {text!r} is not one of {', '.join(options)}", line, key)
        return text

    return parse


def _flag(text, key, line):
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}", line, key)


def _string(text, key, line):
    if not text:
        raise ConfigError(f"{key}: empty value", line, key)
    return text


def _frequency(text, key, line):
    if text == "resonant":
        return None
    return _quantity(_RATE, "frequency")(text, key, line)


def _run_time(text, key, line):
    m = _NUMBER.match(text)
    if m and not m.group(2):
        return float(m.group(1)), False
    return _quantity(_TIME, "time")(text, key, line), True


length = _quantity(_LENGTH, "length")
rate = _quantity(_RATE, "frequency")

#: config key -> (section, field name, parser)
KEYS = {
    "preset": ("material", "preset", _choice(tuple(PRESETS))),
    "omega_p": ("material", "omega_p", rate),
    "gamma_p": ("material", "gamma_p", rate),
    "eps_inf": ("material", "eps_inf", _plain(float)),
    "v_F": ("material", "v_f", _quantity(_SPEED, "speed")),
    "eps_b": ("material", "eps_b", _plain(float)),
    "r": ("geometry", "r", length),
    "r0": ("geometry", "r0", length),
    "s": ("geometry", "s", length),
    "s_min": ("geometry", "s_min", length),
    "s_max": ("geometry", "s_max", length),
    "s_points": ("geometry", "s_points", _plain(int)),
    "r_min": ("geometry", "r_min", length),
    "r_max": ("geometry", "r_max", length),
    "r_points": ("geometry", "r_points", _plain(int)),
    "intensity": ("drive", "intensity", _quantity(_INTENSITY, "intensity")),
    "frequency": ("drive", "frequency", _frequency),
    "gamma": ("qubits", "gamma", rate),
    "delta": ("qubits", "delta", _plain(float)),
    "N": ("run", "n_modes", _plain(int)),
    "analysis": ("run", "analysis", _choice(ANALYSES)),
    "response": ("run", "response", _choice(RESPONSE_KINDS)),
    "initial_state": ("run", "initial_state", _choice(INITIAL_STATES)),
    "t_points": ("run", "t_points", _plain(int)),
    "t_min": ("run", "t_min", _run_time),
    "t_max": ("run", "t_max", _run_time),
    "engine": ("run", "engine", _choice(ENGINES)),
    "workers": ("run", "workers", _plain(int)),
    "rel_tol": ("run", "rel_tol", _plain(float)),
    "abs_tol": ("run", "abs_tol", _plain(float)),
    "output": ("run", "output", _string),
    "radiative_damping": ("run", "radiative_damping", _flag),
    "cross_parity": ("run", "cross_parity", _choice(CROSS_PARITIES)),
    "negative_correction": ("run", "negative_correction", _choice(NEGATIVE_POLICIES)),
}
SECTIONS = ("material", "geometry", "drive", "qubits", "run")
_MATERIAL_FIELDS = ("omega_p", "gamma_p", "eps_inf", "v_F")


def _read_entries(text):
    """Yield (section, key, value, line) from the config text."""
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section [{section}] (expected one of {', '.join(SECTIONS)})", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if section is None:
            raise ConfigError("key outside of any section", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        yield section, key, value, lineno


def parse_config(text, overrides=None):
    """Parse config text into a :class:`RunConfig`.

    ``overrides`` maps config keys to unparsed value strings (as given on
    the command line) and wins over the text.

    Raises
    ------
    ConfigError
        On syntax errors, unknown sections or keys, malformed units,
        missing required keys and out-of-range values. The message carries
        the offending line number where there is one.
    """
    values = {}
    lines = {}
    seen = set()
    for section, key, raw, lineno in _read_entries(text or ""):
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno, key)
        expected, name, parser = KEYS[key]
        if expected != section:
            raise ConfigError(f"key {key!r} belongs in [{expected}], not [{section}]", lineno, key)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno, key)
        seen.add(key)
        values[key] = parser(raw, key, lineno)
        lines[key] = lineno
    for key, raw in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", key=key)
        values[key] = KEYS[key][2](str(raw).strip(), key, None)
        lines[key] = None
        seen.add(key)

    if "preset" not in values and not all(k in values for k in _MATERIAL_FIELDS):
        raise ConfigError("missing required key 'preset' in [material] (or all of omega_p, gamma_p, eps_inf, v_F)",
                          key="preset")

    fields = {}
    for key, value in values.items():
        name = KEYS[key][1]
        if key in ("t_min", "t_max"):
            fields[name] = value[0]
            fields["_abs_" + key] = value[1]
        else:
            fields[name] = value
    abs_flags = {fields.pop("_abs_t_min", None), fields.pop("_abs_t_max", None)} - {None}
    if len(abs_flags) > 1:
        raise ConfigError("t_min and t_max must both be absolute times or both multiples of 1/gamma_a",
                          lines.get("t_max"), "t_max")
    if abs_flags:
        fields["t_absolute"] = abs_flags.pop()
        if fields["t_absolute"] and ("t_min" not in fields or "t_max" not in fields):
            raise ConfigError("absolute time ranges need both t_min and t_max", lines.get("t_min"), "t_min")
    if "preset" not in values:
        # a full set of material parameters replaces the preset
        fields["preset"] = RunConfig.preset
    if fields.get("n_modes") == 1 and "analysis" not in values:
        fields["analysis"] = "dipole"

    cfg = RunConfig(**fields)
    _validate(cfg, lines)
    return cfg


def _validate(cfg, lines):
    def fail(key, message):
        raise ConfigError(message, lines.get(key), key)

    positive = {
        "eps_b": cfg.eps_b, "r": cfg.r, "r0": cfg.r0, "s": cfg.s, "s_min": cfg.s_min, "s_max": cfg.s_max,
        "r_min": cfg.r_min, "r_max": cfg.r_max, "gamma": cfg.gamma, "t_max": cfg.t_max,
        "rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
    }
    for key in ("omega_p", "gamma_p", "eps_inf", "v_F"):
        value = getattr(cfg, KEYS[key][1])
        if value is not None:
            positive[key] = value
    for key, value in positive.items():
        if not (value > 0 and math.isfinite(value)):
            fail(key, f"{key} must be positive, got {value}")
    if cfg.eps_b < 1:
        fail("eps_b", f"eps_b must be >= 1, got {cfg.eps_b}")
    if cfg.intensity < 0:
        fail("intensity", "intensity must be non-negative")
    if cfg.frequency is not None and not cfg.frequency > 0:
        fail("frequency", "frequency must be positive")
    if not 0 <= cfg.delta < 1:
        fail("delta", f"delta is a fraction of the LSPR frequency and must lie in [0, 1), got {cfg.delta}")
    if cfg.n_modes < 1:
        fail("N", f"N must be >= 1, got {cfg.n_modes}")
    if cfg.n_modes > 60:
        fail("N", f"N must be <= 60, got {cfg.n_modes}")
    for key in ("s_points", "r_points", "t_points", "workers"):
        if getattr(cfg, key) < 1:
            fail(key, f"{key} must be >= 1")
    for lo, hi, n in (("s_min", "s_max", "s_points"), ("r_min", "r_max", "r_points")):
        if getattr(cfg, lo) > getattr(cfg, hi) or (getattr(cfg, n) > 1 and getattr(cfg, lo) == getattr(cfg, hi)):
            fail(hi, f"sweep range needs {lo} < {hi}")
    if not 0 < cfg.t_min < cfg.t_max:
        fail("t_min", "time range needs 0 < t_min < t_max")
