#!/usr/bin/env python3
"""Check the stability of e^{-2r} (r ||z*(t)||)^{3/2} E(r, t) for a domain
given as JSON, and run the sampled comparison inequality alongside.

Example:
    python scripts/run_weight_equivalence.py --domain '{"kind":"egg","p":3}'
"""

import argparse
import sys

from rlab.diagnostics import verify_comparison_lemma, verify_weight_equivalence
from rlab.geometry import domain_from_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--domain", default='{"kind":"egg","p":2}',
                        help="domain spec JSON")
    parser.add_argument("--r-lo", type=float, default=2.0)
    parser.add_argument("--r-hi", type=float, default=50.0)
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    geom = domain_from_spec(args.domain)
    rep = verify_weight_equivalence(geom, r_range=(args.r_lo, args.r_hi))
    print(f"rho range: [{rep.rho_min:.8g}, {rep.rho_max:.8g}]")
    print(f"max/min ratio: {rep.ratio:.6f} "
          f"({'stable' if rep.passed else 'NOT stable'} at factor "
          f"{rep.factor})")

    cmp_rep = verify_comparison_lemma(geom, n_samples=args.samples,
                                      seed=args.seed)
    print(f"\ncomparison ratio over {cmp_rep.grid_size} samples: "
          f"[{cmp_rep.empirical_min:.6f}, {cmp_rep.empirical_max:.6f}]")
    print(f"theoretical bracket: [{cmp_rep.theory_C1:.6f}, "
          f"{cmp_rep.theory_C2:.6f}], violations: {cmp_rep.violations}")
    return 0 if rep.passed and cmp_rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
