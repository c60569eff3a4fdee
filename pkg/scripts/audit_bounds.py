"""Run the inner-integral bound audit across a few kernel degrees and print
the worst margins per subdomain."""

import argparse
import sys

from supres.bound_audit import check_master_bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--samples", type=int, default=110)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    exit_code = 0
    for n in args.degrees:
        rep = check_master_bounds(n, sample_count=args.samples, seed=args.seed)
        stats = rep.margin_stats
        print(f"n={n}: {rep.samples} samples, {len(rep.violations)} violations, "
              f"min margin {stats['min_margin']:.4f}, mean {stats['mean_margin']:.4f}")
        worst = sorted(stats["per_domain_min"].items(), key=lambda kv: kv[1])[:5]
        for dom, margin in worst:
            print(f"    {dom:<9} {margin:.4f}")
        if rep.violations:
            exit_code = 2
            for v in rep.violations:
                print(f"    VIOLATION {v['domain']} s={v['s']:.6f} "
                      f"theta={v['theta']:.6f} measured={v['measured']:.3e} "
                      f"bound={v['bound']:.3e}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
