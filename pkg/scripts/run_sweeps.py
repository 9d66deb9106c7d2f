"""Run the shipped approximation sweeps and write their report bundles.

    python scripts/run_sweeps.py [--out OUT] [--workers N] [names ...]
"""

import argparse
import sys
from pathlib import Path

from longwave import cli

ROOT = Path(__file__).resolve().parents[1]
DEFAULT = ["ch_ib", "ch_nonlocal", "bbm_ib", "kdv_ib"]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("names", nargs="*", default=DEFAULT)
    p.add_argument("--out", default="out")
    p.add_argument("--workers", type=int, default=None)
    args = p.parse_args(argv)
    worst = 0
    for name in args.names:
        print(f"== {name}")
        argv = ["sweep", str(ROOT / "configs" / f"{name}.toml"), "-o", str(Path(args.out) / name)]
        if args.workers:
            argv += ["-j", str(args.workers)]
        worst = max(worst, cli.main(argv))
    return worst


if __name__ == "__main__":
    sys.exit(main())
