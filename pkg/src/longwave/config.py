"""TOML experiment configs.

Recognised keys (all optional)::

    model = "CH"            # CH | BBM | KdV
    target = "ib"           # ib | nonlocal
    kernel = "bessel6"
    s = 1.0
    T = 5.0                 # horizon T / eps ...
    t_cap = 10.0            # ... capped here
    t_star = [1, 2, 5]
    sample_dt = 0.25
    dt = 1e-3
    path = [[0.2, 0.2], [0.1, 0.1]]   # or path_eps = [...] (delta = eps, or sqrt(eps) for KdV)
    kdv_band = [1.0, 1.0]
    workers = 0
    output_dir = "out"

    [grid]   L, N
    [w0]     a, b
    [solve]  system (model | ib | nonlocal), eps, delta, t_end, snapshot_dt
    [residual] t = [1.0]
    [[kernels]] name + bessel = r, or name + eta/values/order table

Overrides are ``dotted.key=value`` strings; values are parsed as TOML
literals and fall back to plain strings.
"""

import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .experiments import DatumConfig, GridConfig, SweepConfig, kdv_path

_TOP = {f.name for f in fields(SweepConfig)} | {"path_eps", "solve", "residual"}


@dataclass(frozen=True)
class SolveConfig:
    system: str = "model"  # model | ib | nonlocal
    eps: float = 0.1
    delta: float = 0.1
    t_end: float = 5.0
    snapshot_dt: float = 0.5


@dataclass(frozen=True)
class Experiment:
    sweep: SweepConfig
    solve: SolveConfig
    residual_t: tuple = (1.0,)


def read_toml(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_value(text):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(data, overrides):
    data = _deepcopy(data)
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {item!r} is not of the form key=value")
        node = data
        parts = key.strip().split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {item!r}: {p!r} is not a table")
        node[parts[-1]] = parse_value(value.strip())
    return data


def _deepcopy(d):
    if isinstance(d, dict):
        return {k: _deepcopy(v) for k, v in d.items()}
    if isinstance(d, list):
        return [_deepcopy(v) for v in d]
    return d


def _section(data, name, cls):
    raw = data.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    known = {f.name for f in fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {', '.join(sorted(unknown))}")
    try:
        return cls(**raw)
    except TypeError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None


def _as_tuple(value, name):
    if isinstance(value, (int, float)):
        return (float(value),)
    if not isinstance(value, list):
        raise ConfigError(f"{name} must be a list")
    return tuple(value)


def experiment_from_dict(data):
    unknown = set(data) - _TOP
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    kw = {k: v for k, v in data.items() if k in {f.name for f in fields(SweepConfig)}}
    kw["grid"] = _section(data, "grid", GridConfig)
    if isinstance(kw["grid"].N, float) or kw["grid"].N != int(kw["grid"].N):
        raise ConfigError("grid.N must be an integer")
    kw["w0"] = _section(data, "w0", DatumConfig)
    model = str(data.get("model", "CH"))
    if "path" in data and "path_eps" in data:
        raise ConfigError("give either path or path_eps, not both")
    if "path_eps" in data:
        eps = [float(e) for e in _as_tuple(data["path_eps"], "path_eps")]
        if model.lower() == "kdv":
            c = float(data.get("kdv_band", [1.0, 1.0])[0])
            kw["path"] = kdv_path(eps, c)
        else:
            kw["path"] = tuple((e, e) for e in eps)
    elif "path" in data:
        kw["path"] = tuple(tuple(float(x) for x in p) if isinstance(p, list) else (p,)
                           for p in _as_tuple(data["path"], "path"))
    for key in ("t_star", "kdv_band"):
        if key in kw:
            kw[key] = tuple(float(x) for x in _as_tuple(kw[key], key))
    if "kernels" in kw:
        kw["kernels"] = tuple(_as_tuple(kw["kernels"], "kernels"))
    try:
        sweep = SweepConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    except (ValueError, OverflowError) as exc:
        raise ConfigError(str(exc)) from None
    solve = _section(data, "solve", SolveConfig)
    residual = data.get("residual", {})
    t = residual.get("t", [1.0]) if isinstance(residual, dict) else [1.0]
    return Experiment(sweep, solve, tuple(float(x) for x in _as_tuple(t, "residual.t")))


def load_experiment(path, overrides=()):
    return experiment_from_dict(apply_overrides(read_toml(path), overrides))


def sweep_to_dict(cfg):
    """Plain-data echo of a sweep config (for manifests and records)."""
    out = {}
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if f.name in ("grid", "w0"):
            v = {g.name: getattr(v, g.name) for g in fields(v)}
        elif isinstance(v, tuple):
            v = [list(x) if isinstance(x, tuple) else x for x in v]
        elif isinstance(v, float) and not math.isfinite(v):
            v = str(v)
        out[f.name] = v
    return out
