"""Print psi^(1)_k(0), psi^(2)_k(0) and the verification summary for the descendant wave.

    python3 scripts/descendant_tables.py --n 4 --k-max 42
"""

from __future__ import annotations

import argparse

from twobkp.descendant import P_table, psi_zero, verify_descendant
from twobkp.ring.params import HierarchyParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--k-max", type=int, default=None)
    ap.add_argument("--x-order", type=int, default=3)
    args = ap.parse_args()
    h = HierarchyParams(args.n).h
    k_max = 3 * (h + 1) if args.k_max is None else args.k_max
    print(f"N={args.n}  h={h}")
    for s, P in P_table(args.n).items():
        print(f"P_{s}(D) = " + " + ".join(f"({c}) D^{i}" for i, c in enumerate(P) if c))
    z1, z2 = psi_zero(1, args.n, k_max), psi_zero(2, args.n, k_max)
    for k in range(k_max + 1):
        if z1[k] or z2[k]:
            print(f"k={k:3d}  psi1={z1[k]}  psi2={z2[k]}")
    print(verify_descendant(args.n, k_max, args.x_order).to_text())


if __name__ == "__main__":
    main()
