"""Run configuration: a YAML document parsed into dataclasses.

Every validation failure raises :class:`ConfigError` carrying the dotted key
of the offending entry (``solver.dt``, ``medium.kind``, ...).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .grid import SimParams, build_grid
from .medium import (
    ConstantMedium,
    CosineModulation,
    GaussianBump,
    LinearRamp,
    SinusoidMedium,
    TabulatedMedium,
)

QUANTITIES = ("W0", "W1", "W2", "W3", "W_PhiPhi", "f", "g", "J", "charge", "energy", "residuals")
FORMATS = ("csv", "bin")


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _section(tree, key, allowed, required=()):
    value = tree.get(key) if isinstance(tree, dict) else None
    if value is None:
        value = {}
    if not isinstance(value, dict):
        raise ConfigError(key, "expected a mapping")
    for k in value:
        if k not in allowed:
            raise ConfigError(f"{key}.{k}", "unknown key")
    for k in required:
        if k not in value:
            raise ConfigError(f"{key}.{k}", "required key is missing")
    return value


def _number(section, prefix, key, default=None, positive=False, nonneg=False):
    full = f"{prefix}.{key}"
    if key not in section:
        if default is None:
            raise ConfigError(full, "required key is missing")
        return float(default)
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(full, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(full, "must be finite")
    if positive and v <= 0:
        raise ConfigError(full, f"must be positive, got {v}")
    if nonneg and v < 0:
        raise ConfigError(full, f"must be non-negative, got {v}")
    return v


@dataclass(frozen=True)
class GridConfig:
    n: int
    length: float


@dataclass(frozen=True)
class WaveConfig:
    amplitude: float
    k: float
    branch: int = 1


@dataclass(frozen=True, eq=False)
class InitialConfig:
    kind: str
    waves: tuple = ()
    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    k0: float = 0.0
    branch: int = 1
    Phi: Optional[np.ndarray] = None
    dPhi_dt: Optional[np.ndarray] = None


@dataclass(frozen=True)
class SolverConfig:
    dt: Optional[float]
    t_end: float
    observer_stride: int = 1
    cfl_safety: float = 0.9
    method: str = "wave"


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    formats: tuple = ("bin",)
    quantities: tuple = ("W_PhiPhi", "charge")


@dataclass(frozen=True)
class SWLConfig:
    force: str = "printed"
    slow_manifold: bool = True


@dataclass(frozen=True)
class CaseConfig:
    amp0: float = 1.0
    amp1: float = 1.0
    k0: float = math.sqrt(3.0)
    k1: float = 0.0
    times: tuple = (0.0,)


@dataclass(frozen=True, eq=False)
class RunConfig:
    grid: GridConfig
    params: SimParams
    medium: object
    initial: Optional[InitialConfig]
    solver: SolverConfig
    outputs: OutputConfig
    swl: SWLConfig = field(default_factory=SWLConfig)
    case: CaseConfig = field(default_factory=CaseConfig)

    def build_grid(self):
        return build_grid(self.grid.n, self.grid.length, self.params)


def _parse_grid(tree):
    s = _section(tree, "grid", ("n", "length"), ("n", "length"))
    n = s["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ConfigError("grid.n", f"expected an integer, got {n!r}")
    if n < 4 or n % 2:
        raise ConfigError("grid.n", f"must be even and >= 4, got {n}")
    return GridConfig(n, _number(s, "grid", "length", positive=True))


def _parse_params(tree):
    s = _section(tree, "params", ("epsilon", "c", "omega_p0", "split_norm"))
    vals = {k: _number(s, "params", k, 1.0, positive=True) for k in ("epsilon", "c", "omega_p0")}
    norm = s.get("split_norm", 0.5)
    if isinstance(norm, str):
        table = {"1/2": 0.5, "1/sqrt2": 1 / math.sqrt(2), "1/sqrt(2)": 1 / math.sqrt(2)}
        if norm not in table:
            raise ConfigError("params.split_norm", f"unknown value {norm!r}")
        norm = table[norm]
    elif isinstance(norm, (int, float)) and not isinstance(norm, bool):
        for ref in (0.5, 1 / math.sqrt(2)):
            if abs(norm - ref) < 1e-12:
                norm = ref
    try:
        return SimParams(split_norm=float(norm), **vals)
    except (ValueError, TypeError) as exc:
        raise ConfigError("params.split_norm", str(exc)) from None


def _parse_modulation(s):
    m = s.get("modulation")
    if m is None:
        return None
    if not isinstance(m, dict):
        raise ConfigError("medium.modulation", "expected a mapping")
    for k in m:
        if k not in ("kind", "offset", "amplitude", "omega", "phase"):
            raise ConfigError(f"medium.modulation.{k}", "unknown key")
    if m.get("kind", "cosine") != "cosine":
        raise ConfigError("medium.modulation.kind", "only 'cosine' is supported")
    p = "medium.modulation"
    return CosineModulation(
        offset=_number(m, p, "offset", 1.0),
        amplitude=_number(m, p, "amplitude", 0.0),
        omega=_number(m, p, "omega", 0.0),
        phase=_number(m, p, "phase", 0.0),
    )


def _read_column_csv(path, key, columns):
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except OSError as exc:
        raise ConfigError(key, f"cannot read {path}: {exc}") from None
    names = data.dtype.names or ()
    out = []
    for c in columns:
        if c not in names:
            out.append(None)
        else:
            out.append(np.atleast_1d(np.asarray(data[c], dtype=float)))
    return out


def _parse_medium(tree, base):
    raw = tree.get("medium")
    if raw is None:
        return None
    allowed = {
        "constant": ("value",),
        "linear-ramp": ("slope", "offset", "curvature", "origin", "window"),
        "sinusoid": ("amplitude", "wavelength", "phase"),
        "gaussian-bump": ("amplitude", "center", "width"),
        "tabulated": ("file", "values"),
    }
    if not isinstance(raw, dict):
        raise ConfigError("medium", "expected a mapping")
    kind = raw.get("kind")
    if kind not in allowed:
        raise ConfigError("medium.kind", f"must be one of {sorted(allowed)}, got {kind!r}")
    s = _section(tree, "medium", ("kind", "modulation") + allowed[kind])
    mod = _parse_modulation(s)
    p = "medium"
    if kind == "constant":
        return ConstantMedium(_number(s, p, "value", 0.0), modulation=mod)
    if kind == "sinusoid":
        return SinusoidMedium(
            _number(s, p, "amplitude"), _number(s, p, "wavelength", positive=True),
            _number(s, p, "phase", 0.0), modulation=mod,
        )
    if kind == "gaussian-bump":
        return GaussianBump(
            _number(s, p, "amplitude"), _number(s, p, "center"),
            _number(s, p, "width", positive=True), modulation=mod,
        )
    if kind == "linear-ramp":
        win = s.get("window")
        if win is None:
            raise ConfigError("medium.window", "linear-ramp requires a window [lo, hi]")
        if not (isinstance(win, (list, tuple)) and len(win) == 2
                and all(isinstance(x, (int, float)) for x in win) and win[0] < win[1]):
            raise ConfigError("medium.window", f"expected [lo, hi] with lo < hi, got {win!r}")
        return LinearRamp(
            _number(s, p, "slope", 0.0), _number(s, p, "offset", 0.0),
            _number(s, p, "curvature", 0.0), _number(s, p, "origin", 0.0),
            (float(win[0]), float(win[1])), modulation=mod,
        )
    if "values" in s:
        vals = s["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError("medium.values", "expected a non-empty list of numbers")
        vals = np.asarray(vals, dtype=float)
    elif "file" in s:
        (vals,) = _read_column_csv(base / s["file"], "medium.file", ["value"])
        if vals is None:
            raise ConfigError("medium.file", "CSV needs a 'value' column")
    else:
        raise ConfigError("medium.values", "tabulated medium needs 'values' or 'file'")
    return TabulatedMedium(values=vals, modulation=mod)


def _branch(s, key):
    b = s.get("branch", 1)
    if b in ("forward", "+", "positive"):
        b = 1
    elif b in ("backward", "-", "negative"):
        b = -1
    if b not in (1, -1):
        raise ConfigError(key, f"branch must be +1 or -1, got {b!r}")
    return int(b)


def _parse_initial(tree, base):
    raw = tree.get("initial")
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError("initial", "expected a mapping")
    kind = raw.get("kind")
    allowed = {
        "plane-waves": ("waves",),
        "gaussian-packet": ("amplitude", "center", "width", "k0", "branch"),
        "tabulated": ("file", "branch"),
    }
    if kind not in allowed:
        raise ConfigError("initial.kind", f"must be one of {sorted(allowed)}, got {kind!r}")
    s = _section(tree, "initial", ("kind",) + allowed[kind])
    if kind == "plane-waves":
        waves = s.get("waves")
        if not isinstance(waves, list) or not waves:
            raise ConfigError("initial.waves", "expected a non-empty list")
        out = []
        for i, w in enumerate(waves):
            key = f"initial.waves[{i}]"
            if not isinstance(w, dict):
                raise ConfigError(key, "expected a mapping")
            for k in w:
                if k not in ("amplitude", "k", "branch"):
                    raise ConfigError(f"{key}.{k}", "unknown key")
            out.append(WaveConfig(_number(w, key, "amplitude"), _number(w, key, "k"),
                                  _branch(w, f"{key}.branch")))
        return InitialConfig(kind, waves=tuple(out))
    if kind == "gaussian-packet":
        p = "initial"
        return InitialConfig(
            kind, amplitude=_number(s, p, "amplitude", 1.0), center=_number(s, p, "center"),
            width=_number(s, p, "width", positive=True), k0=_number(s, p, "k0", 0.0),
            branch=_branch(s, "initial.branch"),
        )
    if "file" not in s:
        raise ConfigError("initial.file", "tabulated initial condition needs a file")
    re_, im_, dre, dim = _read_column_csv(
        base / s["file"], "initial.file", ["Phi_re", "Phi_im", "dPhi_re", "dPhi_im"]
    )
    if re_ is None or im_ is None:
        raise ConfigError("initial.file", "CSV needs Phi_re and Phi_im columns")
    dphi = None
    if dre is not None and dim is not None:
        dphi = dre + 1j * dim
    return InitialConfig(kind, Phi=re_ + 1j * im_, dPhi_dt=dphi, branch=_branch(s, "initial.branch"))


def _parse_solver(tree):
    s = _section(tree, "solver", ("dt", "t_end", "observer_stride", "cfl_safety", "method"))
    dt = s.get("dt", "auto")
    if dt == "auto" or dt is None:
        dt = None
    else:
        dt = _number(s, "solver", "dt", positive=True)
    stride = s.get("observer_stride", 1)
    if isinstance(stride, bool) or not isinstance(stride, int) or stride < 1:
        raise ConfigError("solver.observer_stride", f"expected a positive integer, got {stride!r}")
    cfl = _number(s, "solver", "cfl_safety", 0.9, positive=True)
    if cfl > 1:
        raise ConfigError("solver.cfl_safety", f"must lie in (0, 1], got {cfl}")
    method = s.get("method", "wave")
    if method not in ("wave", "spinor"):
        raise ConfigError("solver.method", f"must be 'wave' or 'spinor', got {method!r}")
    return SolverConfig(dt, _number(s, "solver", "t_end", 0.0, nonneg=True), stride, cfl, method)


def _parse_outputs(tree):
    s = _section(tree, "outputs", ("directory", "formats", "quantities"))
    formats = s.get("formats", ["bin"])
    if isinstance(formats, str):
        formats = [formats]
    for f in formats:
        if f not in FORMATS:
            raise ConfigError("outputs.formats", f"unknown format {f!r}; use csv or bin")
    quantities = s.get("quantities", ["W_PhiPhi", "charge"])
    if isinstance(quantities, str):
        quantities = [quantities]
    for q in quantities:
        if q not in QUANTITIES:
            raise ConfigError("outputs.quantities", f"unknown quantity {q!r}")
    return OutputConfig(str(s.get("directory", "out")), tuple(formats), tuple(quantities))


def _parse_swl(tree):
    s = _section(tree, "swl", ("force", "slow_manifold"))
    force = s.get("force", "printed")
    if force not in ("printed", "canonical"):
        raise ConfigError("swl.force", f"must be 'printed' or 'canonical', got {force!r}")
    slow = s.get("slow_manifold", True)
    if not isinstance(slow, bool):
        raise ConfigError("swl.slow_manifold", "expected true or false")
    return SWLConfig(force, slow)


def _parse_case(tree):
    s = _section(tree, "case", ("amp0", "amp1", "k0", "k1", "t"))
    t = s.get("t", 0.0)
    times = t if isinstance(t, list) else [t]
    for x in times:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ConfigError("case.t", f"expected a number or list of numbers, got {x!r}")
    return CaseConfig(
        _number(s, "case", "amp0", 1.0), _number(s, "case", "amp1", 1.0),
        _number(s, "case", "k0", math.sqrt(3.0)), _number(s, "case", "k1", 0.0),
        tuple(float(x) for x in times),
    )


TOP_LEVEL = ("grid", "params", "medium", "initial", "solver", "outputs", "swl", "case")


def parse_config(tree, base_dir="."):
    if not isinstance(tree, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    for k in tree:
        if k not in TOP_LEVEL:
            raise ConfigError(str(k), "unknown section")
    base = Path(base_dir)
    return RunConfig(
        grid=_parse_grid(tree),
        params=_parse_params(tree),
        medium=_parse_medium(tree, base),
        initial=_parse_initial(tree, base),
        solver=_parse_solver(tree),
        outputs=_parse_outputs(tree),
        swl=_parse_swl(tree),
        case=_parse_case(tree),
    )


def load_config(path):
    path = Path(path)
    try:
        tree = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"invalid YAML: {exc}") from None
    return parse_config(tree, path.parent)
