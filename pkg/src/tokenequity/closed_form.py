"""Risk-neutral equilibrium in closed form.

With linear utility and beta = 1/R, both assets are priced at the present
value of what an investor can actually get out of them before consuming.
Equity pays only at t=2 and only to late consumers; tokens pay phi1 at t=1
and phi2 of the remainder at t=2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CannotFinance, DegenerateCase, IlliquidToken
from .model_core import P1, P2, ModelParams, future_profit, validate_params


@dataclass(frozen=True)
class EquitySolution:
    q: float
    e: float
    r_equity: float
    payoff: float
    c1_type_a: float
    c2_type_b: float
    warnings: tuple = ()

    asset = "equity"

    @property
    def price(self) -> float:
        return self.q

    @property
    def quantity(self) -> float:
        return self.e

    @property
    def required_return(self) -> float:
        return self.r_equity


@dataclass(frozen=True)
class TokenSolution:
    p0: float
    t0: float
    r_token: float
    payoff: float
    t1_new: float
    t2_new: float
    c1_type_a: float
    c2_type_b: float
    feasibility_warning: bool = False
    warnings: tuple = field(default=())

    asset = "token"

    @property
    def price(self) -> float:
        return self.p0

    @property
    def quantity(self) -> float:
        return self.t0

    @property
    def required_return(self) -> float:
        return self.r_token


def resale_weight(params: ModelParams) -> float:
    """phi2(1-phi1) + phi1 R: t=2 value of the tokens investors resell, per token sold at t=0."""
    return params.phi2 * (1.0 - params.phi1) + params.phi1 * params.R


def _profit_warnings(pi: float) -> tuple:
    return ("negative_profit",) if pi < 0 else ()


def solve_equity_rn(params: ModelParams) -> EquitySolution:
    validate_params(params)
    R, lam, I = params.R, params.lam, params.I
    if lam == 1.0:
        raise DegenerateCase("lambda = 1: no investor ever values equity")
    pi = future_profit(params)
    q = (1.0 - lam) * pi / R**2
    if q <= 0.0:
        raise CannotFinance(f"equity price q={q:.6g} is not positive (profit={pi:.6g})")
    if I > q:
        raise CannotFinance(f"whole share worth q={q:.6g} < I={I:.6g}")
    e = I / q
    b0 = params.bond_holding
    return EquitySolution(
        q=q,
        e=e,
        r_equity=R**2 / (1.0 - lam),
        payoff=pi - I * R**2 / (1.0 - lam),
        c1_type_a=b0 * R,
        c2_type_b=b0 * R**2 + e * pi,
        warnings=_profit_warnings(pi),
    )


def token_price_rn(params: ModelParams) -> float:
    R = params.R
    return params.phi1 / R + (1.0 - params.lam) * params.phi2 * (1.0 - params.phi1) / R**2


def solve_token_rn(params: ModelParams) -> TokenSolution:
    validate_params(params)
    R, lam, phi1, phi2, I = params.R, params.lam, params.phi1, params.phi2, params.I
    p0 = token_price_rn(params)
    if p0 <= 0.0:
        raise IlliquidToken(f"token price is zero (phi1={phi1}, phi2={phi2}, lambda={lam})")
    pi = future_profit(params)
    t0 = I / p0
    if not math.isfinite(t0):
        raise IlliquidToken(f"token price {p0:.3g} too small: issuance overflows")
    weight = resale_weight(params)
    payoff = pi - I * R**2 * weight / (lam * R * phi1 + (1.0 - lam) * weight)
    t1_new = params.y1 - phi1 * t0
    t2_new = params.y2 - phi2 * (1.0 - phi1) * t0
    # issuance-based payoff: new tokens sold at p1, p2, proceeds carried at R
    by_issuance = t2_new * P2 + (t1_new * P1 - params.omega) * R - params.omega
    scale = max(1.0, abs(pi), weight * t0 * R)
    assert math.isclose(payoff, by_issuance, rel_tol=1e-9, abs_tol=1e-9 * scale)
    c1 = params.bond_holding * R + phi1 * t0
    warnings = _profit_warnings(pi)
    infeasible = t1_new < 0.0 or t2_new < 0.0
    if t1_new < 0.0:
        warnings += ("negative_issuance_t1",)
    if t2_new < 0.0:
        warnings += ("negative_issuance_t2",)
    return TokenSolution(
        p0=p0,
        t0=t0,
        r_token=1.0 / p0,
        payoff=payoff,
        t1_new=t1_new,
        t2_new=t2_new,
        c1_type_a=c1,
        c2_type_b=c1 * R + phi2 * (1.0 - phi1) * t0,
        feasibility_warning=infeasible,
        warnings=warnings,
    )


def payoff_derivatives_rn(params: ModelParams) -> tuple[float, float]:
    """Analytic partials of the risk-neutral token payoff in phi1 and phi2."""
    validate_params(params)
    R, lam, phi1, phi2, I = params.R, params.lam, params.phi1, params.phi2, params.I
    D = (phi1 * (R - (1.0 - lam) * phi2) + (1.0 - lam) * phi2) ** 2
    if D == 0.0:
        raise DegenerateCase("token price is zero; payoff derivatives undefined")
    d_phi1 = I * R**2 * R * lam * phi2 / D
    d_phi2 = -I * R**2 * (1.0 - phi1) * lam * phi1 * R / D
    return d_phi1, d_phi2


def bond_benchmark(params: ModelParams) -> float:
    """Entrepreneur payoff when I is borrowed at the risk-free rate."""
    return future_profit(params) - params.I * params.R**2
