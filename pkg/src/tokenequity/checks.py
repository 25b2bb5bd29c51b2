"""End-to-end verification suite behind ``tokenequity verify``.

Each check returns a CheckResult; the CLI prints them as a table and exits
nonzero if any failed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .closed_form import bond_benchmark, payoff_derivatives_rn, solve_equity_rn, solve_token_rn
from .crra_solver import FixedPointConfig, solve_equity_crra, solve_token_crra
from .errors import BracketError, CannotFinance, ModelError, NoEquilibrium
from .model_core import DEFAULT_PARAMS, ModelParams
from .oracle import clearing_price, fd_derivative_check, foc_residual
from .sweep import figure1_data

ORACLE_SIGMAS = (0.5, 1.0, 2.0, 4.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def random_financeable_params(n: int, seed: int = 0) -> list[ModelParams]:
    """``n`` random valid points with phi1 in (0, 1], lambda in (0, 1) and financeable equity."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        lam = rng.uniform(0.0, 1.0)
        if lam == 0.0:
            continue
        I = rng.uniform(0.1, 10.0)
        p = ModelParams(
            R=rng.uniform(1.0, 1.2),
            lam=lam,
            phi1=1.0 - rng.uniform(0.0, 1.0),
            phi2=rng.uniform(0.0, 1.0),
            y1=rng.uniform(0.0, 30.0),
            y2=rng.uniform(0.0, 30.0),
            omega=rng.uniform(0.0, 5.0),
            I=I,
            W=I + rng.uniform(0.5, 20.0),
        )
        try:
            solve_equity_rn(p)
        except CannotFinance:
            continue
        out.append(p)
    return out


def check_token_dominance(base: ModelParams, n: int = 1000, seed: int = 0) -> CheckResult:
    worst = np.inf
    failures = 0
    for p in random_financeable_params(n, seed):
        gap = solve_token_rn(p).payoff - solve_equity_rn(p).payoff
        worst = min(worst, gap)
        failures += gap <= 0
    return CheckResult("token_beats_equity", failures == 0,
                       f"{n} draws, {failures} failures, min gap {worst:.3e}")


def check_limits(base: ModelParams, tol: float = 1e-12) -> CheckResult:
    gaps = []
    for lam in (base.lam, 0.0, 0.2, 0.5):
        p = base.replace(lam=lam)
        try:
            eq = solve_equity_rn(p)
        except CannotFinance:
            continue
        tok = solve_token_rn(p.replace(phi1=0.0, phi2=1.0))
        gaps += [abs(tok.payoff - eq.payoff), abs(tok.r_token - eq.r_equity)]
        tok = solve_token_rn(p.replace(phi1=1.0))
        gaps += [abs(tok.payoff - bond_benchmark(p)), abs(tok.r_token - p.R)]
    worst = max(gaps)
    return CheckResult("limit_identities", worst <= tol, f"max abs gap {worst:.2e} (tol {tol:.0e})")


def check_payoff_derivatives(base: ModelParams, n: int = 20, rtol: float = 1e-6) -> CheckResult:
    grid = np.linspace(0.025, 0.975, n)
    bad_sign = 0
    worst = 0.0
    for phi1 in grid:
        for phi2 in grid:
            p = base.replace(phi1=phi1, phi2=phi2)
            d1, d2 = payoff_derivatives_rn(p)
            bad_sign += (d1 < 0) + (d2 > 0)
            worst = max(worst, *fd_derivative_check(p, step=1e-6).rel_gap)
    ok = bad_sign == 0 and worst <= rtol
    return CheckResult("payoff_derivatives", ok,
                       f"{n}x{n} grid, {bad_sign} sign violations, max rel FD gap {worst:.2e}")


def verification_points(base: ModelParams) -> list[ModelParams]:
    return [
        base,
        base.replace(lam=0.3),
        base.replace(I=min(1.0, base.I)),
        base.replace(phi1=0.25, phi2=0.5),
    ]


def check_crra_consistency(base: ModelParams, rtol: float = 1e-3, foc_tol: float = 1e-8) -> CheckResult:
    cfg = FixedPointConfig()
    # sigma -> 0 continuity
    tiny = base.replace(sigma=1e-8)
    eq_n, tok_n = solve_equity_rn(base), solve_token_rn(base)
    eq_a, tok_a = solve_equity_crra(tiny, cfg), solve_token_crra(tiny, cfg)
    cont = max(
        abs(eq_a.q_a / eq_n.q - 1), abs(eq_a.payoff / eq_n.payoff - 1),
        abs(tok_a.p0_a / tok_n.p0 - 1), abs(tok_a.payoff / tok_n.payoff - 1),
    )
    worst_price, worst_foc, compared, agreed_none, disagreements = 0.0, 0.0, 0, 0, 0
    for point in verification_points(base):
        for sigma in ORACLE_SIGMAS:
            p = point.replace(sigma=sigma)
            for asset, solve in (("equity", solve_equity_crra), ("token", solve_token_crra)):
                try:
                    sol = solve(p, cfg)
                except NoEquilibrium:
                    try:
                        clearing_price(p, asset)
                        disagreements += 1
                    except BracketError:
                        agreed_none += 1
                    continue
                price = clearing_price(p, asset)
                worst_price = max(worst_price, abs(price / sol.price - 1))
                worst_foc = max(worst_foc, *(abs(v) for v in foc_residual(p, sol).values()))
                compared += 1
    ok = cont <= 1e-6 and worst_price <= rtol and worst_foc <= foc_tol and disagreements == 0
    return CheckResult(
        "crra_oracle_consistency", ok,
        f"sigma=1e-8 rel gap {cont:.1e}; {compared} solver/oracle prices, max rel gap {worst_price:.1e}; "
        f"max FOC residual {worst_foc:.1e}; {agreed_none} agreed no-equilibrium, {disagreements} disagreements",
    )


def check_payoff_curves(base: ModelParams, spot_tol: float = 1e-3) -> CheckResult:
    rows = figure1_data(base)
    eq = [(r.grid_value, r.equity_payoff) for r in rows if r.equity_payoff is not None]
    tok = [(r.grid_value, r.token_payoff) for r in rows if r.token_payoff is not None]
    problems = []
    if len(tok) != len(rows):
        problems.append("token leg failed on some rows")
    solved = [r.equity_payoff is not None for r in rows]
    # equity may stop financing past a threshold but must not come back
    if any(solved[i + 1] and not solved[i] for i in range(len(solved) - 1)):
        problems.append("equity feasibility is not a prefix of the sigma grid")
    if any(b[1] > a[1] for a, b in zip(eq, eq[1:])):
        problems.append("equity payoff increases in sigma")
    if any(b[1] > a[1] for a, b in zip(tok, tok[1:])):
        problems.append("token payoff increases in sigma")
    if any(r.payoff_diff is not None and r.payoff_diff < 0 for r in rows):
        problems.append("equity above token")
    eq_drop = eq[0][1] - eq[-1][1]
    tok_drop = tok[0][1] - tok[-1][1]
    if not eq_drop > tok_drop:
        problems.append(f"equity decline {eq_drop:.4f} <= token decline {tok_drop:.4f}")
    spot = ""
    if base.replace(lam=0.1, sigma=0.0) == DEFAULT_PARAMS:
        at2 = next(r for r in rows if abs(r.grid_value - 2.0) < 1e-12)
        if at2.equity_payoff is None or abs(at2.equity_payoff - 2.5942) > spot_tol:
            problems.append(f"equity payoff at sigma=2 is {at2.equity_payoff}")
        if abs(at2.token_payoff - 10.3541) > spot_tol:
            problems.append(f"token payoff at sigma=2 is {at2.token_payoff}")
        spot = f"; sigma=2 payoffs {at2.equity_payoff:.4f}/{at2.token_payoff:.4f}"
    detail = (f"{len(rows)} rows, equity solved on {len(eq)}; declines equity {eq_drop:.4f} "
              f"token {tok_drop:.4f}{spot}")
    if problems:
        detail += "; " + "; ".join(problems)
    return CheckResult("payoff_vs_sigma", not problems, detail)


def check_price_dominance(base: ModelParams, rtol: float = 1e-9) -> CheckResult:
    cfg = FixedPointConfig()
    sigmas = sorted(set(np.linspace(0.0, 5.0, 21).tolist()) | set(ORACLE_SIGMAS))
    worst = -np.inf
    n = 0
    for point in [base.replace(lam=0.1)] + verification_points(base):
        q_n, p_n = solve_equity_rn(point).q, solve_token_rn(point).p0
        for s in sigmas:
            if s == 0:
                continue
            p = point.replace(sigma=s)
            try:
                worst = max(worst, solve_equity_crra(p, cfg).q_a / q_n - 1)
                n += 1
            except NoEquilibrium:
                pass
            worst = max(worst, solve_token_crra(p, cfg).p0_a / p_n - 1)
            n += 1
    return CheckResult("price_dominance", worst <= rtol,
                       f"{n} comparisons, max (crra/risk-neutral - 1) = {worst:.2e}")


CHECKS = (
    check_token_dominance,
    check_limits,
    check_payoff_derivatives,
    check_crra_consistency,
    check_payoff_curves,
    check_price_dominance,
)


def run_all(base: ModelParams = DEFAULT_PARAMS) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        t = time.perf_counter()
        try:
            res = check(base)
        except ModelError as exc:
            res = CheckResult(check.__name__.removeprefix("check_"), False, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t
        results.append(res)
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  status  seconds  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.seconds:7.2f}  {r.detail}")
    return "\n".join(lines)
