"""Largest sigma at which equity still raises I, across a few issue sizes.

Past this point the investors' demand for the share never reaches I at any
price, so there is no equity equilibrium; tokens keep solving.

    python scripts/equity_threshold.py --lam 0.1
"""

import argparse

from tokenequity import DEFAULT_PARAMS
from tokenequity.errors import ModelError
from tokenequity.crra_solver import solve_equity
from tokenequity.sweep import feasibility_boundary


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam", type=float, default=0.1)
    ap.add_argument("--sigma-max", type=float, default=20.0)
    args = ap.parse_args()

    for I in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0):
        base = DEFAULT_PARAMS.replace(lam=args.lam, I=I)
        try:
            solve_equity(base.replace(sigma=args.sigma_max))
            print(f"I={I:g}: equity solves up to sigma={args.sigma_max:g}")
            continue
        except ModelError:
            pass
        # a coarse walk first: the boundary search needs a solving left end
        lo = 0.0
        while lo + 0.25 < args.sigma_max:
            try:
                solve_equity(base.replace(sigma=lo + 0.25))
            except ModelError:
                break
            lo += 0.25
        s = feasibility_boundary(base, "equity", "sigma", lo, args.sigma_max)
        print(f"I={I:g}: equity has no equilibrium above sigma ~ {s:.6f}")


if __name__ == "__main__":
    main()
