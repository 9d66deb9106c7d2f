"""Approximation experiments: a unidirectional solution w against the
bidirectional solution u launched from the same data, ``u(0) = w0`` and
``u_t(0) = w_t(0)``, with the H^s error recorded along the way and fitted
against ``(eps^2 + delta^4) t`` or ``eps^2 t``.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from . import grid as gs
from .energy import build_error_state, energy_row
from .errors import BlowUp, ConfigError, DegenerateFit, LongwaveError, NonZeroMean
from .bidirectional import solve_bidirectional
from .fits import law_value, loglog_fit
from .kernels import bessel_kernel, default_registry, table_kernel
from .unidirectional import KDV, KDV_NORMALIZED, get_model, sech2, solve_unidirectional, time_derivative

@dataclass(frozen=True)
class GridConfig:
    L: float = 64 * math.pi
    N: int = 1024

    def build(self):
        return gs.make_grid(self.L, self.N)


@dataclass(frozen=True)
class DatumConfig:
    a: float = 1.0
    b: float = 1.0

    def build(self, grid):
        return sech2(grid, self.a, self.b)


@dataclass(frozen=True)
class SweepConfig:
    model: str = "CH"
    target: str = "ib"  # "ib" or "nonlocal"
    kernel: Optional[str] = None
    path: tuple = ((0.2, 0.2), (0.1, 0.1), (0.05, 0.05))
    s: float = 1.0
    T: float = 5.0  # horizon T / eps, capped at t_cap
    t_cap: float = 10.0
    t_star: tuple = (1.0, 2.0, 5.0, 10.0)
    sample_dt: float = 0.25
    dt: float = 1e-3
    grid: GridConfig = field(default_factory=GridConfig)
    w0: DatumConfig = field(default_factory=DatumConfig)
    kdv_band: tuple = (1.0, 1.0)  # c1 <= delta^2 / eps <= c2 for KdV
    threshold: float = 1e6
    energies: bool = True
    workers: int = 0  # 0: one per available CPU
    kernels: tuple = ()  # extra kernel definitions, see build_kernel
    output_dir: str = "out"

    def __post_init__(self):
        validate(self)

    @property
    def law(self):
        return "eps2" if self.model.lower() == "kdv" else "eps2+delta4"

    def horizon(self, eps):
        return min(self.T / eps, self.t_cap)


def validate(cfg):
    if not cfg.path:
        raise ConfigError("parameter path is empty")
    model = get_model_or_config_error(cfg.model)
    target = str(cfg.target).lower()
    if target not in ("ib", "nonlocal"):
        raise ConfigError(f"target must be 'ib' or 'nonlocal', got {cfg.target!r}")
    if target == "nonlocal" and not cfg.kernel:
        raise ConfigError("target 'nonlocal' needs a kernel")
    if cfg.kernel:
        resolve_kernel(cfg.kernel, cfg.kernels)
    for pair in cfg.path:
        if len(pair) != 2:
            raise ConfigError(f"path entries are (eps, delta) pairs, got {pair!r}")
        eps, delta = map(float, pair)
        if model is KDV:
            check_kdv_point(eps, delta, cfg.kdv_band)
        elif not (0 < eps <= delta <= 1):
            raise ConfigError(
                f"(eps, delta) = ({eps:g}, {delta:g}) violates 0 < eps <= delta <= 1"
            )
    if cfg.s < 0 or cfg.dt <= 0 or cfg.sample_dt <= 0 or cfg.T <= 0 or cfg.t_cap <= 0:
        raise ConfigError("s must be >= 0 and T, t_cap, dt, sample_dt positive")
    ratio = cfg.sample_dt / cfg.dt
    if abs(ratio - round(ratio)) > 1e-9 * ratio:
        raise ConfigError("sample_dt must be an integer multiple of dt")
    for t in cfg.t_star:
        q = t / cfg.sample_dt
        if t <= 0 or abs(q - round(q)) > 1e-9 * max(q, 1.0):
            raise ConfigError(f"t* = {t:g} is not a positive multiple of sample_dt")


def get_model_or_config_error(name):
    try:
        return get_model(name)
    except LongwaveError as exc:
        raise ConfigError(str(exc)) from None


def check_kdv_point(eps, delta, band=(1.0, 1.0)):
    c1, c2 = map(float, band)
    if not 0 < c1 <= c2:
        raise ConfigError("KdV band needs 0 < c1 <= c2")
    if not 0 < eps:
        raise ConfigError("eps must be positive")
    ratio = delta**2 / eps
    if not c1 * (1 - 1e-12) <= ratio <= c2 * (1 + 1e-12):
        raise ConfigError(
            f"KdV point (eps, delta) = ({eps:g}, {delta:g}) has delta^2/eps = {ratio:g}"
            f" outside [{c1:g}, {c2:g}]"
        )
    if delta**2 > 1.0 / 3.0 + 1e-15:
        raise ConfigError(f"KdV runs need delta^2 <= 1/3, got {delta**2:g}")


def kdv_path(eps_values, c=1.0):
    """Pairs ``(eps, sqrt(c eps))`` on the KdV scaling."""
    return tuple((float(e), math.sqrt(c * e)) for e in eps_values)


def build_kernel(spec):
    """Kernel from a config entry: ``{"name", "bessel": r}`` or ``{"name", "eta", "values", "order"}``."""
    spec = dict(spec)
    name = spec.get("name")
    if "bessel" in spec:
        k = bessel_kernel(float(spec["bessel"]))
        if name and name != k.name:
            raise ConfigError(f"bessel kernel of order {spec['bessel']} is named {k.name!r}")
        return k
    try:
        return table_kernel(name, spec["eta"], spec["values"], spec["order"])
    except KeyError as exc:
        raise ConfigError(f"kernel entry {name!r} lacks {exc.args[0]!r}") from None
    except LongwaveError as exc:
        raise ConfigError(str(exc)) from None


def kernel_registry(extra=()):
    reg = default_registry()
    for spec in extra:
        k = build_kernel(spec)
        reg[k.name] = k
    return reg


def resolve_kernel(name, extra=()):
    reg = kernel_registry(extra)
    if name not in reg:
        raise ConfigError(f"unknown kernel {name!r}; registered: {', '.join(sorted(reg))}")
    return reg[name]


@dataclass
class RunRecord:
    model: str
    target: str
    kernel: Optional[str]
    eps: float
    delta: float
    s: float
    times: list
    errors: list
    energy: list = field(default_factory=list)
    status: str = "ok"  # ok | blowup | energy-regime-exit
    message: str = ""

    def error_at(self, t):
        for tt, e in zip(self.times, self.errors):
            if abs(tt - t) <= 1e-9 * max(1.0, t):
                return e
        raise KeyError(f"no error sample at t={t}")

    def to_dict(self):
        return asdict(self)


def _target_object(cfg):
    if str(cfg.target).lower() == "nonlocal":
        return resolve_kernel(cfg.kernel, cfg.kernels)
    return "ib"


def run_point(cfg, eps, delta):
    """One path point: solve both equations, record errors and energies."""
    grid = cfg.grid.build()
    model = get_model(cfg.model)
    target = _target_object(cfg)
    kernel = target if target != "ib" else None
    w0 = cfg.w0.build(grid)
    w1 = time_derivative(grid, w0, model, eps, delta)
    t_end = cfg.horizon(eps)
    n_end = int(math.floor(t_end / cfg.sample_dt + 1e-9))
    t_end = n_end * cfg.sample_dt
    stride = int(round(cfg.sample_dt / cfg.dt))
    rec = RunRecord(
        model=model.name,
        target="nonlocal" if kernel is not None else "ib",
        kernel=kernel.name if kernel is not None else None,
        eps=float(eps),
        delta=float(delta),
        s=float(cfg.s),
        times=[],
        errors=[],
    )
    if n_end < 1:
        rec.status, rec.message = "blowup", "horizon shorter than one sample interval"
        return rec

    try:
        tw = solve_unidirectional(grid, w0, model, eps, delta, t_end, cfg.dt, stride=stride,
                                  threshold=cfg.threshold)
    except BlowUp as exc:
        rec.status, rec.message = "blowup", f"unidirectional: {exc}"
        tw = exc.trajectory
    try:
        tu = solve_bidirectional(grid, w0, w1, target, eps, delta, t_end, cfg.dt, stride=stride,
                                 threshold=cfg.threshold)
    except BlowUp as exc:
        rec.status, rec.message = "blowup", f"bidirectional: {exc}"
        tu = exc.trajectory

    n = min(len(tw), len(tu))
    for i in range(n):
        t = float(tw.times[i])
        rec.times.append(t)
        rec.errors.append(gs.sobolev_norm(grid, tu.states[i] - tw.states[i], cfg.s))
        if cfg.energies:
            try:
                state = build_error_state(grid, tu.states[i], tu.velocities[i], tw.states[i],
                                          model, eps, delta, cfg.s, time=t)
            except NonZeroMean as exc:
                rec.message = rec.message or f"t={t:g}: {exc}"
                continue
            row = energy_row(state, kernel)
            if math.isnan(row["E_s"]) and rec.status == "ok":
                rec.status = "energy-regime-exit"
                rec.message = f"E_s^2 < 0 at t={t:g}"
            rec.energy.append(row)
    return rec


def _run_pair(args):
    cfg, eps, delta = args
    return run_point(cfg, eps, delta)


def run_approximation(cfg, target=None, workers=None):
    """All path points of ``cfg``, in path order. ``target`` overrides ``cfg.target``."""
    if target is not None:
        cfg = replace(cfg, target=target)
    if workers is None:
        workers = cfg.workers or os.cpu_count() or 1
    jobs = [(cfg, float(e), float(d)) for e, d in cfg.path]
    if workers <= 1 or len(jobs) == 1:
        return [_run_pair(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_pair, jobs))




def fit_error_law(records, law="eps2+delta4", t_star=None, window=(1.7, 2.3)):
    """Scaling fits of the error records.

    * slope of log error against log eps at each fixed t* (all records),
    * slope of log error against log t at each fixed (eps, delta) over the t*,
    * ``C``: the smallest constant with ``error <= C law(eps, delta) t`` at every
      positive sample up to the largest t*, plus the log-mean constant and the
      worst ratio to it.

    Raises DegenerateFit with fewer than 3 usable records or 3 times.
    """
    records = [r for r in records if r.times]
    if len(records) < 3:
        raise DegenerateFit("need at least three path points")
    common = set(round(t, 9) for t in records[0].times)
    for r in records[1:]:
        common &= set(round(t, 9) for t in r.times)
    if t_star is None:
        t_star = sorted(t for t in common if t > 0)
    else:
        t_star = sorted(float(t) for t in t_star if round(float(t), 9) in common)
    if len(t_star) < 3:
        raise DegenerateFit("need at least three common time samples")

    eps = [r.eps for r in records]
    by_t = {}
    for t in t_star:
        f = loglog_fit(eps, [r.error_at(t) for r in records])
        f["verdict"] = _verdict(f["slope"], window)
        by_t[t] = f
    by_point = []
    for r in records:
        f = loglog_fit(t_star, [r.error_at(t) for t in t_star])
        f.update(eps=r.eps, delta=r.delta)
        by_point.append(f)

    ratios = []
    tmax = max(t_star)
    for r in records:
        scale = law_value(r.eps, r.delta, law)
        for t, e in zip(r.times, r.errors):
            if 0 < t <= tmax + 1e-9:
                ratios.append(e / (scale * t))
    ratios = np.array(ratios)
    c_env = float(ratios.max())
    c_fit = float(np.exp(np.mean(np.log(ratios))))
    return dict(
        law=law,
        t_star=list(t_star),
        eps_fits={f"{t:g}": v for t, v in by_t.items()},
        t_fits=by_point,
        C=c_env,
        C_logmean=c_fit,
        max_violation=float(ratios.max() / c_fit - 1.0),
        ratio_spread=float(ratios.max() / ratios.min()),
        envelope_flags=envelope_flags(records, tmax),
    )


def _verdict(slope, window):
    lo, hi = window
    if slope > hi:
        return "sharper than bound"
    if slope < lo:
        return "weaker than bound"
    return "consistent"


def envelope_flags(records, t_max):
    """Path points whose max error up to t_max grows when eps decreases."""
    ordered = sorted(records, key=lambda r: -r.eps)
    env = [max(e for t, e in zip(r.times, r.errors) if t <= t_max + 1e-9) for r in ordered]
    return [
        dict(eps=ordered[i + 1].eps, envelope=env[i + 1], previous=env[i])
        for i in range(len(env) - 1)
        if env[i + 1] > env[i]
    ]


def kdv_normalization(w0, eps, delta, band=(0.0, math.inf)):
    """Map KdV data to the normalised form: ``q0 = (2/9)(eps/delta^2) w0``, ``eps_bar = 3 delta^2``.

    ``q`` then solves ``q_t + q_x + (3/2) eps_bar q q_x + (1/6) eps_bar q_xxx = 0``
    (the KDV_NORMALIZED preset with ``eps = delta^2 = eps_bar``).
    """
    c1, c2 = band
    ratio = delta**2 / eps
    if not (eps > 0 and delta > 0 and c1 <= ratio <= c2):
        raise ConfigError(f"delta^2/eps = {ratio:g} outside the band [{c1:g}, {c2:g}]")
    return (2.0 / 9.0) * (eps / delta**2) * np.asarray(w0, dtype=float), 3.0 * delta**2


def kdv_round_trip(grid, w0, eps, delta, t_end, dt=1e-3):
    """Direct KdV solve against the normalised solve mapped back; returns ``(w, w_via_q)``."""
    w = solve_unidirectional(grid, w0, KDV, eps, delta, t_end, dt).states[-1]
    q0, eps_bar = kdv_normalization(w0, eps, delta)
    q = solve_unidirectional(grid, q0, KDV_NORMALIZED, eps_bar, math.sqrt(eps_bar), t_end, dt)
    return w, (9.0 / 2.0) * (delta**2 / eps) * q.states[-1]


def unidirectional_gap(grid, w0, model_a, model_b, eps, delta, t_end, dt=1e-3, s=1.0, stride=None):
    """``|w_a - w_b|_{H^s}`` over time for two models from the same datum."""
    a = solve_unidirectional(grid, w0, model_a, eps, delta, t_end, dt, stride=stride)
    b = solve_unidirectional(grid, w0, model_b, eps, delta, t_end, dt, stride=stride)
    gaps = [gs.sobolev_norm(grid, x - y, s) for x, y in zip(a.states, b.states)]
    return a.times, np.array(gaps)
