"""Report bundles: records.csv, records.json, fits.json, energy CSVs, SVG plots, manifest."""

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .errors import DegenerateFit, LongwaveError
from .experiments import RunRecord, fit_error_law
from .fits import law_value
from .io import write_json, write_manifest, write_rows

RECORD_HEADER = ["model", "target", "kernel", "epsilon", "delta", "s", "t", "error_Hs", "status"]
ENERGY_HEADER = ["t", "E_s", "E_tilde", "norm_r_Hs"]
RESIDUAL_HEADER = ["epsilon", "delta", "t", "s", "norm_F"]


def _svg(fig, path):
    with matplotlib.rc_context({"svg.hashsalt": "longwave", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})


def _energy_name(i, rec):
    return f"energy/energy_{i:02d}_eps{rec.eps:g}_delta{rec.delta:g}.csv"


def _plot_error_vs_eps(records, fits, law, path):
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot()
    t_star = fits.get("t_star") or sorted({t for r in records for t in r.times if t > 0})[-1:]
    for t in t_star:
        rows = [r for r in records if _has(r, t) and r.error_at(t) > 0]
        if not rows:
            continue
        ax.loglog([r.eps for r in rows], [r.error_at(t) for r in rows], "o-", label=f"t = {t:g}")
        if "C" in fits:
            bound = [fits["C"] * law_value(r.eps, r.delta, law) * t for r in rows]
            ax.loglog([r.eps for r in rows], bound, "k--", lw=0.8)
    _finish(ax, "epsilon", f"error vs epsilon (dashed: C {law} t)")
    _svg(fig, path)


def _plot_error_vs_t(records, fits, law, path):
    fig = Figure(figsize=(5, 4))
    ax = fig.add_subplot()
    for r in records:
        pts = [(t, e) for t, e in zip(r.times, r.errors) if t > 0 and e > 0]
        if not pts:
            continue
        ts, es = zip(*pts)
        ax.loglog(ts, es, "-", label=f"eps={r.eps:g}, delta={r.delta:g}")
        if "C" in fits:
            ax.loglog(ts, [fits["C"] * law_value(r.eps, r.delta, law) * t for t in ts], "k--", lw=0.8)
    _finish(ax, "t", f"error vs t (dashed: C {law} t)")
    _svg(fig, path)


def _finish(ax, xlabel, title):
    ax.set_xlabel(xlabel)
    ax.set_ylabel("|u - w|_Hs")
    ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7)


def _has(rec, t):
    try:
        rec.error_at(t)
        return True
    except KeyError:
        return False


def make_report(records, out_dir, law=None, t_star=None, config=None):
    """Write the bundle for ``records`` into ``out_dir``; returns the fit summary."""
    records = [r if isinstance(r, RunRecord) else RunRecord(**r) for r in records]
    if not records:
        raise LongwaveError("no records to report")
    out = Path(out_dir)
    (out / "plots").mkdir(parents=True, exist_ok=True)
    law = law or ("eps2" if records[0].model.lower() == "kdv" else "eps2+delta4")

    rows = []
    for r in records:
        for t, e in zip(r.times, r.errors):
            rows.append([r.model, r.target, r.kernel or "", r.eps, r.delta, r.s, t, e, r.status])
    files = ["records.csv", "records.json", "fits.json"]
    write_rows(out / "records.csv", RECORD_HEADER, rows)
    write_json(out / "records.json", dict(config=config, records=[r.to_dict() for r in records]))

    try:
        fits = fit_error_law(records, law, t_star)
        fits["status"] = "ok"
    except DegenerateFit as exc:
        fits = dict(law=law, status="degenerate", reason=str(exc))
    fits["points"] = [dict(eps=r.eps, delta=r.delta, status=r.status, message=r.message)
                      for r in records]
    write_json(out / "fits.json", fits)

    if any(r.energy for r in records):
        (out / "energy").mkdir(exist_ok=True)
        for i, r in enumerate(records):
            name = _energy_name(i, r)
            write_rows(out / name, ENERGY_HEADER, [[row[h] for h in ENERGY_HEADER] for row in r.energy])
            files.append(name)

    _plot_error_vs_eps(records, fits, law, out / "plots" / "error_vs_eps.svg")
    _plot_error_vs_t(records, fits, law, out / "plots" / "error_vs_t.svg")
    files += ["plots/error_vs_eps.svg", "plots/error_vs_t.svg"]
    write_manifest(out, files, dict(kind="sweep", law=law))
    return fits


def write_residual_report(samples, fits, out_dir):
    """``residual.csv`` and ``residual_fits.json`` for a residual scan."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_rows(out / "residual.csv", RESIDUAL_HEADER,
               [[x.eps, x.delta, x.t, x.s, x.norm_F] for x in samples])
    payload = {f"{t:g}": v for t, v in fits.items()}
    write_json(out / "residual_fits.json", payload)
    write_manifest(out, ["residual.csv", "residual_fits.json"], dict(kind="residual"))
