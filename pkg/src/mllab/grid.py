"""Cartesian parameter grids: presets, a compact string syntax and INI files.

Grid strings are ``;``-separated axis specs, either ``name=min:max:count`` with an
optional ``,log=true|false`` suffix or an explicit set ``name={a,b,c}``::

    z=0:0.99:10,log=false;beta=0.5:4:5;gamma={0.1,0.5,1}

Axes not mentioned keep their preset values. ``z`` holds the points used by
every check; ``z_neg`` holds the extra points that only real-line checks see.
"""

import configparser
from dataclasses import dataclass, field, fields, replace
import math

import numpy as np

from .errors import ConfigError
from .series import SeriesConfig

AXES = ("alpha", "beta", "beta2", "gamma", "q", "n", "z", "z_neg")
_INT_AXES = ("n",)


@dataclass(frozen=True)
class AxisRange:
    min: float
    max: float
    count: int
    log: bool = False

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"count must be an integer >= 1, got {self.count}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("range bounds must be finite")
        if self.min > self.max:
            raise ConfigError(f"min {self.min:g} exceeds max {self.max:g}")
        if self.log and self.min <= 0:
            raise ConfigError("log scale needs min > 0")

    def values(self):
        if self.count == 1:
            return (float(self.min),)
        pts = (np.geomspace if self.log else np.linspace)(self.min, self.max, int(self.count))
        return tuple(float(v) for v in pts)


@dataclass(frozen=True)
class GridSpec:
    alpha: tuple
    beta: tuple
    gamma: tuple
    q: tuple
    n: tuple
    z: tuple
    z_neg: tuple = ()
    beta2: tuple = None  # defaults to the beta axis
    preset: str = None

    def __post_init__(self):
        for name in AXES:
            vals = getattr(self, name)
            if vals is None:
                continue
            vals = tuple(float(v) for v in vals)
            if name in _INT_AXES:
                if any(int(v) != v for v in vals):
                    raise ConfigError(f"axis {name} takes integers only")
                vals = tuple(int(v) for v in vals)
            if name != "z_neg" and not vals:
                raise ConfigError(f"axis {name} is empty")
            object.__setattr__(self, name, vals)

    def axis(self, name, real_line=False):
        if name == "beta2":
            return self.beta if self.beta2 is None else self.beta2
        if name == "z" and real_line:
            return tuple(sorted(set(self.z) | set(self.z_neg)))
        return getattr(self, name)

    def to_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["beta2"] = self.axis("beta2")
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def _logz(lo, hi, count):
    return AxisRange(lo, hi, count, log=True).values()


PRESETS = {
    # coarse: three points per axis, no negative z
    "smoke": dict(alpha=(0.5, 1.0, 2.0), beta=(0.5, 1.5, 3.0), gamma=(0.5, 1.0, 2.5),
                  q=(0.5, 1.0, 2.0), n=(0, 1, 2), z=_logz(1e-3, 10.0, 3)),
    "standard": dict(alpha=(0.25, 0.5, 1.0, 2.0, 3.0), beta=(0.5, 1.0, 1.5, 2.5, 5.0),
                     gamma=(0.5, 1.0, 2.5), q=(0.5, 1.0, 2.0), n=(0, 1, 2),
                     z=_logz(1e-6, 50.0, 25), z_neg=AxisRange(-5.0, -0.1, 8).values()),
    # ten times the standard sampling density along z
    "deep": dict(alpha=(0.25, 0.5, 1.0, 2.0, 3.0), beta=(0.5, 1.0, 1.5, 2.5, 5.0),
                 gamma=(0.5, 1.0, 2.5), q=(0.5, 1.0, 2.0), n=(0, 1, 2),
                 z=_logz(1e-6, 50.0, 250), z_neg=AxisRange(-5.0, -0.1, 80).values()),
}


def preset(name):
    try:
        return GridSpec(preset=name, **PRESETS[name])
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def _num(text, axis):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"axis {axis}: cannot parse number {text!r}") from None


def parse_axis(name, spec):
    """Values for one axis from ``min:max:count[,log=..]`` or ``{a,b,c}``."""
    spec = spec.strip()
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise ConfigError(f"axis {name}: unterminated set {spec!r}")
        items = [s for s in spec[1:-1].split(",") if s.strip()]
        if not items:
            raise ConfigError(f"axis {name}: empty set")
        return tuple(sorted(_num(s, name) for s in items))
    head, *opts = spec.split(",")
    parts = head.split(":")
    if len(parts) != 3:
        raise ConfigError(f"axis {name}: expected min:max:count, got {head!r}")
    lo, hi = _num(parts[0], name), _num(parts[1], name)
    count = _num(parts[2], name)
    log = lo > 0
    for opt in opts:
        key, _, val = opt.partition("=")
        if key.strip() != "log" or val.strip().lower() not in ("true", "false"):
            raise ConfigError(f"axis {name}: unknown option {opt!r}")
        log = val.strip().lower() == "true"
    return AxisRange(lo, hi, count, log).values()


def parse_grid(text, base=None):
    """Apply a grid string on top of ``base`` (the standard preset by default)."""
    base = preset("standard") if base is None else base
    updates = {}
    try:
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            name, sep, spec = chunk.partition("=")
            name = name.strip()
            if not sep or name not in AXES:
                raise ConfigError(f"bad grid axis {chunk.strip()!r}; axes are {', '.join(AXES)}")
            updates[name] = parse_axis(name, spec)
        return replace(base, **updates)
    except ConfigError as exc:
        raise ConfigError(str(exc), param="grid") from None


_SERIES_KEYS = {"rel_tol": float, "abs_tol": float, "max_terms": int,
                "consecutive_small": int, "z_abs_max": float, "summation": str}


@dataclass(frozen=True)
class FileConfig:
    series: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    preset: str = None


def read_config(path):
    """Parse an INI file with optional ``[series]`` and ``[grid]`` sections."""
    try:
        return _read_config(path)
    except ConfigError as exc:
        raise ConfigError(str(exc), param="config") from None


def _read_config(path):
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    unknown = set(parser.sections()) - {"series", "grid"}
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(sorted(unknown))}")
    series = {}
    if parser.has_section("series"):
        for key, raw in parser.items("series"):
            if key not in _SERIES_KEYS:
                raise ConfigError(f"unknown [series] key {key!r}")
            try:
                series[key] = _SERIES_KEYS[key](raw)
            except ValueError:
                raise ConfigError(f"[series] {key}: bad value {raw!r}") from None
    grid, name = {}, None
    if parser.has_section("grid"):
        for key, raw in parser.items("grid"):
            if key == "preset":
                name = raw.strip()
            elif key in AXES:
                grid[key] = raw
            else:
                raise ConfigError(f"unknown [grid] key {key!r}")
    return FileConfig(series, grid, name)


def resolve(preset_name=None, grid_text=None, file_cfg=None, series_overrides=None):
    """Combine preset, config file and flags; later sources win.

    Returns ``(GridSpec, SeriesConfig)``.
    """
    file_cfg = file_cfg or FileConfig()
    try:
        spec = preset(preset_name or file_cfg.preset or "standard")
        for axis, text in file_cfg.grid.items():
            spec = replace(spec, **{axis: parse_axis(axis, text)})
    except ConfigError as exc:
        raise ConfigError(str(exc), param=exc.param or "config") from None
    if grid_text:
        spec = parse_grid(grid_text, base=spec)
    series = dict(file_cfg.series)
    series.update({k: v for k, v in (series_overrides or {}).items() if v is not None})
    return spec, SeriesConfig(**series)
