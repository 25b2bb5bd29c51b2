"""Brute-force checks of the equilibrium solvers.

Nothing here reuses a pricing formula.  Expected utility is written from the
investor's two-type objective; demand is found by maximising it on a grid;
a market-clearing price is the price at which that demand equals I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import EquitySolution, TokenSolution, payoff_derivatives_rn, solve_token_rn
from .crra_solver import CrraEquitySolution, CrraTokenSolution, crra_utility
from .errors import BracketError, DomainError
from .model_core import ModelParams, future_profit

ASSETS = ("equity", "token")
DEFAULT_GRID_POINTS = 10_001
# grid stops this far (relative to W) short of W so the bond leg stays positive
_EDGE = 1e-9


@dataclass
class FDReport:
    step: float
    analytic: tuple[float, float]
    numeric: tuple[float, float]
    abs_gap: tuple[float, float]
    rel_gap: tuple[float, float]
    one_sided: tuple[bool, bool]


@dataclass
class OracleReport:
    asset: str
    price_tested: float
    optimal_risky_spend: float | None
    clearing_gap: float | None
    indifference_slope: float | None
    foc_residuals: dict = field(default_factory=dict)
    fd_report: FDReport | None = None


def _consumption(params: ModelParams, asset: str, price: float, spend):
    """Period-1 consumption of an early type and period-2 consumption of a late type."""
    spend = np.asarray(spend, dtype=float)
    R = params.R
    bonds = params.W - spend
    units = spend / price
    if asset == "equity":
        c1 = bonds * R
        c2 = bonds * R**2 + units * future_profit(params)
    elif asset == "token":
        c1 = bonds * R + params.phi1 * units
        c2 = c1 * R + params.phi2 * (1.0 - params.phi1) * units
    else:
        raise DomainError(f"asset must be 'equity' or 'token', got {asset!r}")
    return c1, c2


def expected_utility(params: ModelParams, asset: str, price: float, risky_spend):
    """Expected discounted utility of putting ``risky_spend`` into the risky asset.

    Vectorised over ``risky_spend``.  Raises DomainError when any
    consumption is nonpositive and utility is not linear.
    """
    if price <= 0:
        raise DomainError(f"price must be positive, got {price}")
    beta = 1.0 / params.R
    lam, sigma = params.lam, params.sigma
    c1, c2 = _consumption(params, asset, price, risky_spend)
    if sigma == 0:
        u1, u2 = c1, c2  # linear objective; differs from crra_utility(., 0) by a constant
    else:
        u1, u2 = crra_utility(c1, sigma), crra_utility(c2, sigma)
    out = lam * beta * u1 + (1.0 - lam) * beta**2 * u2
    return float(out) if np.ndim(out) == 0 else out


def _safe_eu(params, asset, price, spend):
    """Expected utility with infeasible points mapped to -inf."""
    spend = np.atleast_1d(np.asarray(spend, dtype=float))
    c1, c2 = _consumption(params, asset, price, spend)
    ok = (c1 > 0) & (c2 > 0)
    out = np.full(spend.shape, -np.inf)
    if params.sigma == 0:
        ok = np.ones_like(ok)
    if ok.any():
        out[ok] = expected_utility(params, asset, price, spend[ok])
    return out


def grid_demand(params: ModelParams, asset: str, price: float, grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """Utility-maximising risky spend at ``price``.

    Uniform grid over [0, W(1 - 1e-9)], then golden-section refinement in the
    two cells around the best grid point down to a width of 1e-9 W.  Ties go
    to the lower spend.
    """
    if grid_points < 3:
        raise DomainError("grid_points must be >= 3")
    if price <= 0:
        raise DomainError(f"price must be positive, got {price}")
    W = params.W
    top = W * (1.0 - _EDGE)
    xs = np.linspace(0.0, top, grid_points)
    vals = _safe_eu(params, asset, price, xs)
    k = int(np.argmax(vals))  # first maximum: lowest spend on ties
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, grid_points - 1)]

    def f(x):
        return float(_safe_eu(params, asset, price, x)[0])

    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-9 * W:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    best_x, best_v = float(xs[k]), float(vals[k])
    for x, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_x, best_v = float(x), v
    return best_x


def indifference_slope(params: ModelParams, asset: str, price: float) -> float:
    """d(expected utility)/d(risky spend) at spend = I, by central difference.

    Zero at a correct price under linear utility.
    """
    h = 1e-4 * params.W
    x = params.I
    up = expected_utility(params, asset, price, x + h)
    dn = expected_utility(params, asset, price, x - h)
    return (up - dn) / (2.0 * h)


def _excess(params, asset, price, grid_points):
    return grid_demand(params, asset, price, grid_points) - params.I


def find_clearing_bracket(params: ModelParams, asset: str, grid_points: int = DEFAULT_GRID_POINTS,
                          ratio: float = 0.97) -> tuple[float, float]:
    """Bracket the highest market-clearing price by walking down from above.

    The walk starts at twice the largest undiscounted payout of one unit
    (Pi for the share, 1 for a token), where bonds dominate and demand is
    zero.  Demand can be hump-shaped in price under strong curvature, so the
    walk stops at the first price where demand exceeds I rather than
    bisecting over a wide range.  Equity prices below I are inadmissible
    (they would need more than the whole share).
    """
    if asset == "equity":
        payout = future_profit(params)
        if payout <= 0:
            raise BracketError("equity pays nothing; no positive price clears")
        floor = params.I
    else:
        payout = 1.0
        floor = 1e-6
    p = 2.0 * payout
    if _excess(params, asset, p, grid_points) >= 0:
        raise BracketError(f"demand exceeds I at the no-arbitrage ceiling {p:.6g}")
    while p > floor:
        nxt = max(p * ratio, floor)
        if _excess(params, asset, nxt, grid_points) > 0:
            return nxt, p
        p = nxt
    raise BracketError(f"no {asset} price above {floor:.6g} clears the market")


def clearing_price(params: ModelParams, asset: str, lo: float | None = None, hi: float | None = None,
                   grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """Price at which grid demand equals I, to within 1e-6 W.

    Needs strictly concave utility; linear utility makes demand set-valued
    and is refused.
    """
    if params.sigma <= 0:
        raise BracketError("demand is set-valued under linear utility; use indifference_slope")
    if lo is None or hi is None:
        lo, hi = find_clearing_bracket(params, asset, grid_points)
    ex_lo = _excess(params, asset, lo, grid_points)
    ex_hi = _excess(params, asset, hi, grid_points)
    if not (ex_lo > 0 > ex_hi):
        raise BracketError(
            f"bracket [{lo:.6g}, {hi:.6g}] does not straddle clearing "
            f"(excess demand {ex_lo:.3g}, {ex_hi:.3g})"
        )
    tol = 1e-6 * params.W
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        ex = _excess(params, asset, mid, grid_points)
        if abs(ex) <= tol or hi - lo <= 1e-14 * hi:
            return mid
        if ex > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _marginal_utility(c, sigma):
    return np.power(c, -sigma) if sigma else np.ones_like(np.asarray(c, dtype=float))


def foc_residual(params: ModelParams, solution) -> dict:
    """First-order conditions of the investor problem at a solved equilibrium.

    The multiplier on the budget is taken from the bond condition, so the
    remaining conditions are returned as relative residuals:

    ``risky``   (marginal value of the risky asset - multiplier * price) / (multiplier * price);
                negative means the asset is overpriced.
    ``bond``    the same pricing condition read from the bond side.
    ``budget``  (W - B0 - price * quantity) / W.

    Risk-neutral solutions are evaluated with linear utility.
    """
    if isinstance(solution, (EquitySolution, TokenSolution)):
        sigma, c1_rec = 0.0, solution.c1_type_a
    elif isinstance(solution, (CrraEquitySolution, CrraTokenSolution)):
        sigma, c1_rec = params.sigma, solution.c1
    else:
        raise DomainError(f"not a solution: {type(solution).__name__}")
    R, lam = params.R, params.lam
    beta = 1.0 / R
    price, qty = solution.price, solution.quantity
    if solution.asset == "equity":
        b0 = c1_rec / R
        c1 = b0 * R
        c2 = b0 * R**2 + qty * future_profit(params)
        risky_payout_1 = 0.0
        risky_payout_2 = future_profit(params)
    else:
        b0 = (c1_rec - params.phi1 * qty) / R
        c1 = b0 * R + params.phi1 * qty
        c2 = c1 * R + params.phi2 * (1.0 - params.phi1) * qty
        risky_payout_1 = params.phi1
        risky_payout_2 = params.phi1 * R + params.phi2 * (1.0 - params.phi1)
    mu1 = float(_marginal_utility(c1, sigma))
    mu2 = float(_marginal_utility(c2, sigma))
    # dL/dB0 and dL/d(quantity), without the multiplier term
    bond_side = lam * beta * mu1 * R + (1.0 - lam) * beta**2 * mu2 * R**2
    risky_side = lam * beta * mu1 * risky_payout_1 + (1.0 - lam) * beta**2 * mu2 * risky_payout_2
    return {
        "bond": (bond_side - risky_side / price) / bond_side,
        "risky": (risky_side - bond_side * price) / (bond_side * price),
        "budget": (params.W - b0 - price * qty) / params.W,
    }


def fd_derivative_check(params: ModelParams, step: float = 1e-6, floor: float = 1e-6) -> FDReport:
    """Finite differences of the risk-neutral token payoff against the analytic partials.

    Central differences, one-sided when phi +/- step leaves [0, 1].
    Relative gaps divide by max(|analytic|, ``floor``).
    """
    analytic = payoff_derivatives_rn(params)
    numeric, one_sided = [], []
    for name in ("phi1", "phi2"):
        x = getattr(params, name)
        f = lambda v: solve_token_rn(params.replace(**{name: v})).payoff
        if x - step >= 0.0 and x + step <= 1.0:
            numeric.append((f(x + step) - f(x - step)) / (2.0 * step))
            one_sided.append(False)
        elif x + 2 * step <= 1.0:
            numeric.append((-3 * f(x) + 4 * f(x + step) - f(x + 2 * step)) / (2.0 * step))
            one_sided.append(True)
        else:
            numeric.append((3 * f(x) - 4 * f(x - step) + f(x - 2 * step)) / (2.0 * step))
            one_sided.append(True)
    abs_gap = tuple(abs(a - n) for a, n in zip(analytic, numeric))
    rel_gap = tuple(g / max(abs(a), floor) for g, a in zip(abs_gap, analytic))
    return FDReport(step, tuple(analytic), tuple(numeric), abs_gap, rel_gap, tuple(one_sided))


def check_solution(params: ModelParams, solution, grid_points: int = DEFAULT_GRID_POINTS) -> OracleReport:
    """Run every applicable oracle check against one solved equilibrium."""
    asset = solution.asset
    risk_neutral = isinstance(solution, (EquitySolution, TokenSolution)) or params.sigma == 0
    report = OracleReport(asset=asset, price_tested=solution.price, optimal_risky_spend=None,
                          clearing_gap=None, indifference_slope=None,
                          foc_residuals=foc_residual(params, solution))
    if risk_neutral:
        report.indifference_slope = indifference_slope(params.replace(sigma=0), asset, solution.price)
    else:
        spend = grid_demand(params, asset, solution.price, grid_points)
        report.optimal_risky_spend = spend
        report.clearing_gap = spend - params.I
    if asset == "token" and risk_neutral and 0 < params.phi1 < 1 and 0 < params.phi2 < 1:
        report.fd_report = fd_derivative_check(params)
    return report
