"""Sweep the section size K and certify both extreme singular values.

Prints one row per K and optionally appends the rows to a CSV with the
same schema as the CLI artifact.
"""

import argparse
import pathlib
import sys

from supres.spectrum import spectrum_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=640)
    ap.add_argument("--kmin", type=int, default=10)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", type=pathlib.Path, default=None)
    args = ap.parse_args()

    ks = []
    k = args.kmin
    while k <= args.kmax:
        ks.append(k)
        k *= 2

    rows = []
    all_ok = True
    print(f"{'K':>7} {'sigma_min':>12} {'sigma_max':>12} {'res_min':>10} {'res_max':>10}  cond")
    for k in ks:
        rep = spectrum_report(k, tol=args.tol, seed=args.seed)
        all_ok = all_ok and rep.condition_holds
        flag = "ok" if rep.condition_holds else "FAIL"
        print(f"{k:>7} {rep.sigma_min:>12.8f} {rep.sigma_max:>12.8f} "
              f"{rep.residual_min:>10.2e} {rep.residual_max:>10.2e}  {flag}")
        rows.append(f"{k},{rep.sigma_min!r},{rep.sigma_max!r},"
                    f"{rep.residual_min!r},{rep.residual_max!r}")

    if args.csv is not None:
        args.csv.write_text("K,sigma_min,sigma_max,res_min,res_max\n"
                            + "".join(r + "\n" for r in rows))
        print(f"wrote {args.csv}")

    return 0 if all_ok else 2


if __name__ == "__main__":
    sys.exit(main())
