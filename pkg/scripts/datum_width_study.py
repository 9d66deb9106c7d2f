"""Residual slope along eps = delta as a function of the sech^2 width b.

The dispersive terms scale like (b delta)^k, so the slope on a finite path
depends on how long the initial wave is compared with delta. Prints one row
per b for CH, BBM and KdV (KdV on delta^2 = eps).

    python scripts/datum_width_study.py [--N 1024] [--b 1 0.5 0.25]
"""

import argparse
import math

from longwave import grid as gs
from longwave import residuals as rs
from longwave import unidirectional as ud
from longwave.experiments import kdv_path


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--b", type=float, nargs="+", default=[1.0, 0.7, 0.5, 0.35, 0.25])
    p.add_argument("--t", type=float, default=1.0)
    args = p.parse_args(argv)
    g = gs.make_grid(64 * math.pi, args.N)
    path = [(e, e) for e in (0.4, 0.2, 0.1, 0.05)]
    kdv = kdv_path((0.2, 0.1, 0.05, 0.025))
    print(f"{'b':>6} {'CH':>8} {'BBM':>8} {'KdV':>8}")
    for b in args.b:
        w0 = ud.sech2(g, 1.0, b)
        row = []
        for model, pairs in ((ud.CH, path), (ud.BBM, path), (ud.KDV, kdv)):
            _, fits = rs.residual_scan(g, w0, model, pairs, [args.t])
            f = fits[args.t]
            row.append(f["slope"] if isinstance(f, dict) else float("nan"))
        print(f"{b:>6g} " + " ".join(f"{s:8.3f}" for s in row))


if __name__ == "__main__":
    main()
