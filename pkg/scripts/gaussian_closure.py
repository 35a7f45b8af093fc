"""Assemble Gaussian tau-functions at a few points and run the Hirota check.

    python3 scripts/gaussian_closure.py --n 4 --points 3 --cap 14
"""

from __future__ import annotations

import argparse
import random
import time

from gmpy2 import mpq

from twobkp.coeffield import Scalar
from twobkp.gaussian import DeformationPoint, assemble, verify_structure
from twobkp.hirota import hirota_check, required_cap


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--cap", type=int, default=14)
    ap.add_argument("--m-max", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for _ in range(args.points):
        t = tuple(Scalar(mpq(rng.randint(-3, 3), rng.randint(1, 4))) for _ in range(args.n))
        point = DeformationPoint(args.n, t)
        start = time.perf_counter()
        model = assemble(point, required_cap(args.n, args.m_max, args.cap))
        structure = verify_structure(model).passed
        hirota = hirota_check(model.tau, args.m_max, args.cap).passed
        print(f"t=({', '.join(str(x) for x in t)})  structure={structure}  hirota={hirota}  "
              f"{time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
