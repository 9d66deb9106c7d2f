"""E_s against the plain quadratic energy along one CH-vs-IB run.

    python scripts/energy_comparison.py [--eps 0.1] [--t-end 10] [--csv energy.csv]
"""

import argparse
import math

from longwave import bidirectional as bd
from longwave import energy as en
from longwave import grid as gs
from longwave import unidirectional as ud
from longwave.io import write_rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--b", type=float, default=0.25)
    p.add_argument("--csv")
    args = p.parse_args(argv)
    g = gs.make_grid(64 * math.pi, 1024)
    eps = delta = args.eps
    w0 = ud.sech2(g, 1.0, args.b)
    w1 = ud.time_derivative(g, w0, ud.CH, eps, delta)
    tw = ud.solve_unidirectional(g, w0, ud.CH, eps, delta, args.t_end, stride=500)
    tu = bd.solve_bidirectional(g, w0, w1, "ib", eps, delta, args.t_end, stride=500)
    rows = []
    print(f"{'t':>6} {'E_s':>12} {'E_tilde':>12} {'|r|_H1':>12}")
    for i in range(len(tw)):
        st = en.build_error_state(g, tu.states[i], tu.velocities[i], tw.states[i], ud.CH, eps, delta, 1.0,
                                  time=tw.times[i])
        row = en.energy_row(st)
        rows.append([row["t"], row["E_s"], row["E_tilde"], row["norm_r_Hs"]])
        print(f"{row['t']:6.2f} {row['E_s']:12.4e} {row['E_tilde']:12.4e} {row['norm_r_Hs']:12.4e}")
    if args.csv:
        write_rows(args.csv, ["t", "E_s", "E_tilde", "norm_r_Hs"], rows)


if __name__ == "__main__":
    main()
