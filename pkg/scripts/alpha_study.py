#!/usr/bin/env python3
"""Where do the new genie bounds beat the prior-art bounds?

Sweeps alpha = log INR / log SNR for the three-user symmetric real channel
and prints the interval where min(change-of-interference, Etkin-type,
hybrid) is strictly below every baseline upper bound.

Usage: python scripts/alpha_study.py [--p 10] [--start -1] [--stop 2] [--step 0.05]
"""

import argparse
import math
import sys

from gicbounds import baselines as bl
from gicbounds import genie3 as g3
from gicbounds.channel import alpha_to_gain, make_symmetric


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=float, default=10.0)
    ap.add_argument("--start", type=float, default=-1.0)
    ap.add_argument("--stop", type=float, default=2.0)
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()

    p = args.p
    print(f"P = {p:g} (SNR = {10 * math.log10(p):.1f} dB)")
    print(f"{'alpha':>6} {'new':>9} {'baseline':>9} {'lower':>9}  winner")
    strict_from = strict_to = None
    a = args.start
    while a <= args.stop + 1e-9:
        g = math.sqrt(alpha_to_gain(a, p))
        ch = make_symmetric(3, g, p)
        new = g3.new_minimum_three(ch)
        base = bl.best_result([
            bl.kramer_two_user(p, g, 3), bl.etw_two_user(p, g, 3),
            bl.gen_kramer_three(ch), bl.z_extension_three(ch)])
        low = bl.lower_bounds(3, g, p).normalized("best")
        strict = new.normalized < base.normalized - 1e-9
        mark = "*new*" if strict else base.name
        print(f"{a:6.2f} {new.normalized:9.5f} {base.normalized:9.5f} "
              f"{low:9.5f}  {mark}")
        if strict and strict_from is None:
            strict_from = a
        if strict:
            strict_to = a
        a += args.step
    if strict_from is not None:
        print(f"\nnew bounds strictly tightest on roughly "
              f"[{strict_from:.2f}, {strict_to:.2f}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
