"""Payoff vs sigma at lambda = 0.1: CSV, SVG and a short console summary.

    python scripts/payoff_vs_sigma.py --out results/payoff_vs_sigma
"""

import argparse
from pathlib import Path

from tokenequity import DEFAULT_PARAMS
from tokenequity.io import rows_to_csv
from tokenequity.svg import payoff_figure
from tokenequity.sweep import GridSpec, feasibility_boundary, figure1_data


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/payoff_vs_sigma"))
    ap.add_argument("--sigma-max", type=float, default=5.0)
    ap.add_argument("--steps", type=int, default=21)
    args = ap.parse_args()

    rows = figure1_data(DEFAULT_PARAMS, GridSpec("sigma", 0.0, args.sigma_max, args.steps))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.with_suffix(".csv").write_text(rows_to_csv(rows))
    args.out.with_suffix(".svg").write_text(payoff_figure(rows))

    print(f"{'sigma':>6} {'equity':>10} {'token':>10}  flags")
    for r in rows:
        eq = "-" if r.equity_payoff is None else f"{r.equity_payoff:.4f}"
        print(f"{r.grid_value:6.2f} {eq:>10} {r.token_payoff:10.4f}  {';'.join(r.flags)}")
    base = DEFAULT_PARAMS.replace(lam=0.1)
    last_ok = max(r.grid_value for r in rows if r.equity_payoff is not None)
    failed = [r.grid_value for r in rows if r.equity_payoff is None]
    if failed:
        s_star = feasibility_boundary(base, "equity", "sigma", last_ok, min(failed))
        print(f"equity stops financing I={base.I:g} at sigma = {s_star:.8f}")
    print(f"wrote {args.out.with_suffix('.csv')} and {args.out.with_suffix('.svg')}")


if __name__ == "__main__":
    main()
