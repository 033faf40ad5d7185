#!/usr/bin/env python3
"""Tabulate the witness series on the domain |z1| + |z2| < 1 and print the
partial sums, fitted tail laws, and the limiting constants they approach.

Example:
    python scripts/run_counterexample.py --kmax 100000
"""

import argparse
import math
import sys

from rlab.diagnostics import l1ball_counterexample

ZETA_3_2 = 2.6123753486854883


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kmax", type=int, default=100_000)
    args = parser.parse_args(argv)

    rep = l1ball_counterexample(args.kmax)
    print(f"K_max = {rep.K_max}")
    print(f"{'k':>8} {'hardy sum':>14} {'nu_F sum':>12} "
          f"{'nu_G sum':>12} {'omega_G sum':>12}")
    k = 10
    while k <= rep.K_max:
        i = k - 1
        print(f"{k:>8} {rep.hardy_partial_sums[i]:>14.6f} "
              f"{rep.bergman_nu_F_partial_sums[i]:>12.6f} "
              f"{rep.bergman_nu_G_partial_sums[i]:>12.6f} "
              f"{rep.bergman_omega_G_partial_sums[i]:>12.6f}")
        k *= 10

    print("\nfitted tail slopes (log term vs log k):")
    for name, slope in rep.tail_law_estimates.items():
        print(f"  {name:>8}: {slope:+.5f}")
    print(f"\nnu_F sum vs zeta(3/2) = {ZETA_3_2:.6f}: "
          f"{rep.bergman_nu_F_partial_sums[-1]:.6f}")
    print(f"k * hardy term at k = 100 vs pi/2 = {math.pi / 2:.6f}: "
          f"{rep.hardy_k_times_term[99]:.6f}")
    print()
    for line in rep.inclusions:
        print(f"* {line}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
