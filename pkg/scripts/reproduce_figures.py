#!/usr/bin/env python3
"""Regenerate the canned figure-style CSV datasets.

Usage:
    python scripts/reproduce_figures.py [--out DIR] [--threads N] [--only id ...]

fig12 and the surfaces take a few minutes at full resolution; pass --only to
restrict the set.
"""

import argparse
import sys
import time

from gicbounds.sweep import FIGURE_IDS, reproduce


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", nargs="*", choices=FIGURE_IDS, default=None)
    args = ap.parse_args()

    ids = args.only or FIGURE_IDS
    for fid in ids:
        t0 = time.time()
        paths = reproduce(fid, args.out, threads=args.threads)
        print(f"{fid}: {len(paths)} file(s) in {time.time() - t0:.1f}s")
        for p in paths:
            print(f"  {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
