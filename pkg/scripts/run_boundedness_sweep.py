#!/usr/bin/env python3
"""Sweep projection norm grids over a family of egg exponents and print the
grid sup, diagonal value, and predicted ray limit for each.

Example:
    python scripts/run_boundedness_sweep.py --exponents 1.5,2,3,4,8 --max 64
"""

import argparse
import sys

import numpy as np

from rlab.geometry import domain_from_exponent, egg_profile
from rlab.leray import boundedness_report, leray_norm_grid, ray_limit_predictor


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--exponents", default="1.5,2,3,4,8",
                        help="comma-separated egg exponents")
    parser.add_argument("--max", type=int, default=64,
                        help="degree bound of the grid")
    args = parser.parse_args(argv)

    print(f"{'p':>8} {'sup||L||^2':>14} {'diag(M,M)':>14} "
          f"{'predicted':>12} {'verdict':>22}")
    for token in args.exponents.split(","):
        p = float(token)
        geom = domain_from_exponent(egg_profile(p))
        grid = leray_norm_grid(geom, args.max, args.max)
        sup = float(np.exp(grid.log_norm_sq).max())
        diag = float(np.exp(grid.log_norm_sq[args.max, args.max]))
        pred = ray_limit_predictor(geom, 1.0).value
        rep = boundedness_report(geom, args.max)
        print(f"{p:>8.3g} {sup:>14.8f} {diag:>14.8f} "
              f"{pred:>12.8f} {rep.verdict:>22}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
