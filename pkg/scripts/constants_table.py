"""Print the scalar constants reproduction and a short table of the
truncation-size bound curve."""

import sys

from supres.constants import constants_report
from supres.qk_operator import truncation_budget


def main():
    rep = constants_report()
    print(f"C1 roots: {rep.C1_root_small:.12g}  {rep.C1_root_large:.12g}")
    print(f"eta*:     {rep.eta_star:.12g}")
    print(f"inputs:   M1'''={rep.M1ppp} M2={rep.M2} lam={rep.lam} eps={rep.eps:.6g}")
    print()
    print(f"{'K':>12} {'f(K)':>14}")
    for k, v in rep.fK_samples[:: max(1, len(rep.fK_samples) // 8)]:
        print(f"{k:>12.4e} {v:>14.10f}")
    print()
    budget = truncation_budget(1e13)
    print(f"truncation budget at K={budget['K_target']:.3e} "
          f"(feasible: {budget['feasible']})")
    for name, b in budget["bounds"].items():
        print(f"    {name:<4} K1=2^{int(b['K1']).bit_length() - 1:<3} "
              f"value {b['value_at_K1']:.3e} <= {b['threshold']:.0e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
