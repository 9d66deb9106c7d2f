"""``longwave`` command line.

    longwave solve    CONFIG [key=value ...] [-o DIR]
    longwave residual CONFIG [key=value ...] [-o DIR]
    longwave sweep    CONFIG [key=value ...] [-o DIR]
    longwave energy   CONFIG [key=value ...] [-o DIR]
    longwave report   DIR
    longwave kernels  [CONFIG] [--json]

Exit codes: 0 ok, 1 configuration error, 2 blow-up, 3 partial sweep failure.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .bidirectional import solve_bidirectional
from .config import load_experiment, read_toml, sweep_to_dict, apply_overrides
from .errors import BlowUp, ConfigError, LongwaveError
from .experiments import (
    check_kdv_point,
    kernel_registry,
    resolve_kernel,
    run_approximation,
)
from .io import export_trajectory, write_manifest, write_rows
from .kernels import check_ellipticity, check_moments
from .report import ENERGY_HEADER, make_report, write_residual_report
from .residuals import residual_bound, residual_scan
from .unidirectional import KDV, get_model, solve_unidirectional, time_derivative

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_PARTIAL = 0, 1, 2, 3

log = logging.getLogger("longwave")


def _out_dir(args, cfg):
    return Path(args.output or cfg.output_dir)


def _check_point(model, eps, delta, band):
    if model is KDV:
        check_kdv_point(eps, delta, band)
    elif not (0 < eps <= delta <= 1):
        raise ConfigError(f"(eps, delta) = ({eps:g}, {delta:g}) violates 0 < eps <= delta <= 1")


def cmd_solve(args):
    exp = load_experiment(args.config, args.overrides)
    cfg, sc = exp.sweep, exp.solve
    grid = cfg.grid.build()
    model = get_model(cfg.model)
    _check_point(model, sc.eps, sc.delta, cfg.kdv_band)
    w0 = cfg.w0.build(grid)
    stride = max(1, int(round(sc.snapshot_dt / cfg.dt)))
    out = _out_dir(args, cfg)
    system = sc.system.lower()
    try:
        if system == "model":
            traj = solve_unidirectional(grid, w0, model, sc.eps, sc.delta, sc.t_end, cfg.dt,
                                        stride=stride, threshold=cfg.threshold)
        elif system in ("ib", "nonlocal"):
            target = "ib" if system == "ib" else resolve_kernel(cfg.kernel, cfg.kernels)
            w1 = time_derivative(grid, w0, model, sc.eps, sc.delta)
            traj = solve_bidirectional(grid, w0, w1, target, sc.eps, sc.delta, sc.t_end, cfg.dt,
                                       stride=stride, threshold=cfg.threshold)
        else:
            raise ConfigError(f"solve.system must be model, ib or nonlocal, got {sc.system!r}")
    except BlowUp as exc:
        if exc.trajectory is not None:
            export_trajectory(exc.trajectory, out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    export_trajectory(traj, out)
    print(f"{system} run: {len(traj)} snapshots to t={traj.times[-1]:g} -> {out}")
    return EXIT_OK


def cmd_residual(args):
    exp = load_experiment(args.config, args.overrides)
    cfg = exp.sweep
    grid = cfg.grid.build()
    model = get_model(cfg.model)
    kernel = resolve_kernel(cfg.kernel, cfg.kernels) if cfg.kernel else None
    samples, fits = residual_scan(grid, cfg.w0.build(grid), model, cfg.path, exp.residual_t,
                                  s=cfg.s, kernel=kernel, dt=cfg.dt)
    for t, f in fits.items():
        C, spread = residual_bound([x for x in samples if x.t == t], cfg.law)
        if isinstance(f, dict):
            f.update(C=C, ratio_spread=spread)
            print(f"t={t:g}: slope {f['slope']:.3f}  C={C:.3e}")
        else:
            print(f"t={t:g}: fit degenerate")
    write_residual_report(samples, fits, _out_dir(args, cfg))
    return EXIT_OK if all(isinstance(f, dict) for f in fits.values()) else EXIT_PARTIAL


def _sweep(args):
    exp = load_experiment(args.config, args.overrides)
    cfg = exp.sweep
    records = run_approximation(cfg, workers=args.workers)
    return cfg, records


def cmd_sweep(args):
    cfg, records = _sweep(args)
    out = _out_dir(args, cfg)
    fits = make_report(records, out, cfg.law, cfg.t_star, sweep_to_dict(cfg))
    for r in records:
        print(f"eps={r.eps:g} delta={r.delta:g}: {r.status}"
              + (f" ({r.message})" if r.message else ""))
    if fits["status"] == "ok":
        for t, f in fits["eps_fits"].items():
            print(f"t*={t}: slope in eps {f['slope']:.3f} ({f['verdict']})")
        for f in fits["t_fits"]:
            print(f"eps={f['eps']:g}: slope in t {f['slope']:.3f}")
        print(f"C = {fits['C']:.4g}")
    else:
        print(f"fit: {fits['reason']}", file=sys.stderr)
    ok = all(r.status == "ok" for r in records) and fits["status"] == "ok"
    return EXIT_OK if ok else EXIT_PARTIAL


def cmd_energy(args):
    cfg, records = _sweep(args)
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, r in enumerate(records):
        name = f"energy_{i:02d}_eps{r.eps:g}_delta{r.delta:g}.csv"
        write_rows(out / name, ENERGY_HEADER, [[row[h] for h in ENERGY_HEADER] for row in r.energy])
        files.append(name)
        gaps = [row["positivity_gap"] for row in r.energy]
        worst = min(gaps) if gaps else math.nan
        print(f"eps={r.eps:g} delta={r.delta:g}: {r.status}, min(4E_s^2 - quadratic) = {worst:.3e}")
    write_manifest(out, files, dict(kind="energy"))
    return EXIT_OK if all(r.status == "ok" for r in records) else EXIT_PARTIAL


def cmd_report(args):
    src = Path(args.config)
    path = src / "records.json" if src.is_dir() else src
    if not path.is_file():
        raise ConfigError(f"records file not found: {path}")
    data = json.loads(path.read_text())
    out = Path(args.output) if args.output else path.parent
    cfg = data.get("config") or {}
    fits = make_report(data["records"], out, t_star=cfg.get("t_star"), config=cfg)
    print(f"report written to {out} ({fits['status']})")
    return EXIT_OK


def kernel_listing(extra=()):
    rows = []
    for name, k in kernel_registry(extra).items():
        ell = check_ellipticity(k)
        try:
            mom = check_moments(k)._asdict()
        except LongwaveError as exc:
            mom = dict(error=str(exc))
        rows.append(dict(
            name=name, order=k.order, admissible=k.admissible,
            ellipticity=dict(c1=ell.c1, c2=ell.c2, passed=ell.passed),
            moments=mom, note=k.note,
        ))
    return rows


def cmd_kernels(args):
    extra = ()
    if args.config:
        data = apply_overrides(read_toml(args.config), args.overrides)
        extra = tuple(data.get("kernels", ()))
    rows = kernel_listing(extra)
    if args.json:
        print(json.dumps(rows, indent=2, default=float))
        return EXIT_OK
    for r in rows:
        e, m = r["ellipticity"], r["moments"]
        moments = (f"m0={m['m0']:.6f} m2={m['m2']:.6f}" if "error" not in m
                   else f"moments unavailable: {m['error']}")
        print(f"{r['name']:<14} r={r['order']:g}  elliptic={'yes' if e['passed'] else 'no'}"
              f" (c1={e['c1']:.3g}, c2={e['c2']:.3g})  {moments}  {r['note']}")
    return EXIT_OK


COMMANDS = dict(solve=cmd_solve, residual=cmd_residual, sweep=cmd_sweep, energy=cmd_energy,
                report=cmd_report, kernels=cmd_kernels)


def build_parser():
    p = argparse.ArgumentParser(prog="longwave", description="Long-wave approximation experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)
    for verb in ("solve", "residual", "sweep", "energy"):
        s = sub.add_parser(verb)
        s.add_argument("config")
        s.add_argument("overrides", nargs="*", metavar="key=value")
        s.add_argument("-o", "--output", help="output directory (overrides output_dir)")
        if verb in ("sweep", "energy"):
            s.add_argument("-j", "--workers", type=int, default=None)
    s = sub.add_parser("report")
    s.add_argument("config", metavar="DIR", help="bundle directory or records.json")
    s.add_argument("-o", "--output")
    s = sub.add_parser("kernels")
    s.add_argument("config", nargs="?")
    s.add_argument("overrides", nargs="*", metavar="key=value")
    s.add_argument("--json", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LongwaveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
