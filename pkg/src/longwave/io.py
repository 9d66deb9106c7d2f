"""CSV and JSON files for fields, trajectories and bundles."""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from . import grid as gs


def fmt(x):
    """Shortest round-tripping text for a float."""
    return repr(float(x))


def write_field_csv(path, grid, u):
    u = gs.check_field(grid, u)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "value"])
        for x, v in zip(grid.x, u):
            w.writerow([fmt(x), fmt(v)])


def read_field_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, files, extra=None):
    """``manifest.json`` listing ``files`` (relative to out_dir) with content hashes."""
    out_dir = Path(out_dir)
    entries = [dict(path=str(f), sha256=sha256(out_dir / f), bytes=(out_dir / f).stat().st_size)
               for f in sorted(files, key=str)]
    manifest = dict(files=entries)
    if extra:
        manifest.update(extra)
    write_json(out_dir / "manifest.json", manifest)
    return manifest


def export_trajectory(traj, out_dir):
    """One CSV per snapshot (``state_00000.csv``; ``velocity_*`` too when present)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, u in enumerate(traj.states):
        name = f"state_{i:05d}.csv"
        write_field_csv(out_dir / name, traj.grid, u)
        files.append(name)
        if traj.velocities is not None:
            name = f"velocity_{i:05d}.csv"
            write_field_csv(out_dir / name, traj.grid, traj.velocities[i])
            files.append(name)
    extra = dict(
        grid=dict(L=traj.grid.length, N=traj.grid.n),
        times=[float(t) for t in traj.times],
        params=traj.params,
        blown_up=traj.blown_up,
    )
    return write_manifest(out_dir, files, extra)
