"""Token minus equity payoff over random financeable parameter draws.

    python scripts/token_advantage_scan.py --n 20000 --seed 1
"""

import argparse

import numpy as np

from tokenequity.checks import random_financeable_params
from tokenequity.closed_form import solve_equity_rn, solve_token_rn


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    draws = random_financeable_params(args.n, args.seed)
    gap = np.array([solve_token_rn(p).payoff - solve_equity_rn(p).payoff for p in draws])
    k = int(np.argmin(gap))
    print(f"{args.n} draws: min gap {gap.min():.4e}, median {np.median(gap):.4f}, "
          f"share positive {np.mean(gap > 0):.4f}")
    print(f"tightest draw: {draws[k]}")


if __name__ == "__main__":
    main()
