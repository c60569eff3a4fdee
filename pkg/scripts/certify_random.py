"""Certify a batch of random well-separated measures and summarize the
interpolation error, the off-atom sup, and the Gram verification."""

import argparse
import sys

import numpy as np

from supres.certificate import (AtomicMeasure, SeparationTooSmall,
                                solve_certificate, eval_eta, verify_bounded)
from supres.gram import assemble_and_verify


def random_measure(rng, n, size, min_sep):
    while True:
        atoms = np.sort(rng.uniform(0.0, 1.0, size=size))
        gaps = np.diff(np.concatenate([atoms, [atoms[0] + 1.0]]))
        if size == 1 or np.min(gaps) >= min_sep:
            break
    phases = rng.uniform(0.0, 2.0 * np.pi, size=size)
    return AtomicMeasure(n, atoms, np.exp(1j * phases))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--atoms", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gram", action="store_true", help="also run the Gram check")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    min_sep = max(4.0 * np.log(args.atoms + 1.0) / args.n, 0.05)

    failures = 0
    for i in range(args.count):
        m = random_measure(rng, args.n, args.atoms, min_sep)
        try:
            c = solve_certificate(m)
        except SeparationTooSmall as exc:
            print(f"[{i}] rejected: {exc}")
            failures += 1
            continue
        interp = np.max(np.abs(eval_eta(c, m.atoms) - m.signs))
        vb = verify_bounded(c)
        line = (f"[{i}] sep={m.separation:.4f} interp={interp:.2e} "
                f"sup_off={vb['sup_off_atom']:.6f} certified={vb['certified']}")
        if args.gram:
            res = assemble_and_verify(c)
            line += (f" min_eig={res['min_eig']:.2e}"
                     f" poly_err={res['sup_poly_err']:.2e}")
        print(line)
        if not vb["certified"]:
            failures += 1

    print(f"{args.count - failures}/{args.count} certified")
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
