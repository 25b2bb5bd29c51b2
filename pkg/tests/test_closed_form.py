"""Risk-neutral closed forms.

Expected values come from an exact rational evaluation of the equilibrium
built from its primitives (present value of what the investor can sell,
entrepreneur's issuance accounting), not from the factored payoff formulas
the solver uses.
"""

from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from tokenequity.closed_form import (
    bond_benchmark,
    payoff_derivatives_rn,
    resale_weight,
    solve_equity_rn,
    solve_token_rn,
    token_price_rn,
)
from tokenequity.errors import CannotFinance, DegenerateCase, IlliquidToken
from tokenequity.model_core import DEFAULT_PARAMS


def exact_equilibrium(R, lam, phi1, phi2, y1, y2, omega, I, W):
    R, lam, phi1, phi2, y1, y2, omega, I, W = map(F, (R, lam, phi1, phi2, y1, y2, omega, I, W))
    beta = 1 / R
    profit = (y1 - omega) * R + y2 - omega
    # equity: only late types get the t=2 profit
    q = (1 - lam) * beta**2 * profit
    e = I / q
    equity_payoff = (1 - e) * profit
    # token: sell phi1 at t=1, phi2 of the rest at t=2 if still holding
    p0 = phi1 * beta + (1 - lam) * beta**2 * phi2 * (1 - phi1)
    t0 = I / p0
    t1_new = y1 - phi1 * t0
    t2_new = y2 - phi2 * (1 - phi1) * t0
    token_payoff = t2_new + (t1_new - omega) * R - omega
    b0 = W - I
    return dict(q=q, e=e, equity_payoff=equity_payoff, c1_e=b0 * R, c2_e=b0 * R**2 + e * profit,
                p0=p0, t0=t0, token_payoff=token_payoff, t1_new=t1_new, t2_new=t2_new,
                c1_t=b0 * R + phi1 * t0, c2_t=(b0 * R + phi1 * t0) * R + phi2 * (1 - phi1) * t0)


DEFAULT_EXACT = exact_equilibrium("1.05", "0.1", "0.5", 1, 10, 10, 2, 5, 10)


def test_oracle_matches_frozen_default_values():
    ex = DEFAULT_EXACT
    assert float(ex["q"]) == pytest.approx(13.387755, abs=1e-6)
    assert float(ex["e"]) == pytest.approx(0.373476, abs=1e-6)
    assert float(ex["equity_payoff"]) == pytest.approx(10.2750, abs=1e-12)
    assert float(ex["p0"]) == pytest.approx(0.884354, abs=1e-6)
    assert float(ex["t0"]) == pytest.approx(5.65385, abs=1e-5)
    assert float(ex["token_payoff"]) == pytest.approx(10.60481, abs=1e-5)
    assert float(ex["t1_new"]) == pytest.approx(7.17308, abs=1e-5)


def test_equity_default_point(base):
    sol = solve_equity_rn(base)
    ex = DEFAULT_EXACT
    assert sol.q == pytest.approx(float(ex["q"]), rel=1e-14)
    assert sol.e == pytest.approx(float(ex["e"]), rel=1e-14)
    assert sol.r_equity == pytest.approx(1.225, rel=1e-14)
    assert sol.payoff == pytest.approx(float(ex["equity_payoff"]), rel=1e-14)
    assert sol.c1_type_a == pytest.approx(5.25, rel=1e-14)
    assert sol.c2_type_b == pytest.approx(11.6375, rel=1e-14)
    assert sol.e * sol.q == pytest.approx(base.I, rel=1e-15)


def test_token_default_point(base):
    sol = solve_token_rn(base)
    ex = DEFAULT_EXACT
    for name, key in [("p0", "p0"), ("t0", "t0"), ("payoff", "token_payoff"), ("t1_new", "t1_new"),
                      ("t2_new", "t2_new"), ("c1_type_a", "c1_t"), ("c2_type_b", "c2_t")]:
        assert getattr(sol, name) == pytest.approx(float(ex[key]), rel=1e-13), name
    assert sol.r_token == pytest.approx(1.130769, abs=1e-6)
    assert sol.c1_type_a == pytest.approx(8.076923, abs=1e-6)
    assert sol.c2_type_b == pytest.approx(11.307692, abs=1e-6)
    assert not sol.feasibility_warning
    assert sol.p0 * sol.t0 == pytest.approx(base.I, rel=1e-15)


def test_equity_lambda_zero_is_pure_discounting(base):
    sol = solve_equity_rn(base.replace(lam=0.0))
    assert sol.r_equity == pytest.approx(base.R**2)
    assert sol.q == pytest.approx(16.4 / base.R**2)


def test_equity_cannot_finance_at_high_lambda(base):
    with pytest.raises(CannotFinance):
        solve_equity_rn(base.replace(lam=0.99))


def test_equity_degenerate_at_lambda_one(base):
    with pytest.raises(DegenerateCase):
        solve_equity_rn(base.replace(lam=1.0))


def test_equity_negative_profit_cannot_finance(base):
    with pytest.raises(CannotFinance):
        solve_equity_rn(base.replace(y1=0.0, y2=0.0))


def test_equity_whole_share_allowed(base):
    q = solve_equity_rn(base).q
    sol = solve_equity_rn(base.replace(I=q, W=q + 1))
    assert sol.e == pytest.approx(1.0)
    assert sol.payoff == pytest.approx(0.0, abs=1e-12)


def test_bond_limit(base):
    p = base.replace(phi1=1.0)
    sol = solve_token_rn(p)
    assert sol.p0 == pytest.approx(1 / base.R, rel=1e-15)
    assert sol.r_token == pytest.approx(base.R, rel=1e-15)
    assert sol.payoff == pytest.approx(bond_benchmark(p), abs=1e-12)
    assert bond_benchmark(base) == pytest.approx(10.8875, abs=1e-12)
    assert bond_benchmark(base.replace(I=1e-300)) == pytest.approx(16.4)


def test_equity_limit(base):
    sol = solve_token_rn(base.replace(phi1=0.0, phi2=1.0))
    eq = solve_equity_rn(base)
    assert sol.p0 == pytest.approx((1 - base.lam) / base.R**2, rel=1e-15)
    assert sol.payoff == pytest.approx(eq.payoff, abs=1e-12)
    assert sol.r_token == pytest.approx(eq.r_equity, abs=1e-12)


def test_illiquid_token(base):
    with pytest.raises(IlliquidToken):
        solve_token_rn(base.replace(phi1=0.0, phi2=0.0))
    with pytest.raises(IlliquidToken):
        solve_token_rn(base.replace(phi1=0.0, lam=1.0))


def test_negative_issuance_is_a_warning(base):
    sol = solve_token_rn(base.replace(y1=1.0, omega=0.5))
    assert sol.t1_new < 0
    assert sol.feasibility_warning
    assert "negative_issuance_t1" in sol.warnings


def test_payoff_derivatives_default(base):
    d1, d2 = payoff_derivatives_rn(base)
    # frozen from central differences of the exact rational payoff, step 1e-6
    h = F(1, 10**6)
    args = dict(R="1.05", lam="0.1", phi2=1, y1=10, y2=10, omega=2, I=5, W=10)
    fd1 = (exact_equilibrium(phi1=F(1, 2) + h, **args)["token_payoff"]
           - exact_equilibrium(phi1=F(1, 2) - h, **args)["token_payoff"]) / (2 * h)
    assert d1 == pytest.approx(float(fd1), rel=1e-6)
    assert d1 == pytest.approx(0.60888, abs=1e-5)
    assert d2 == pytest.approx(-0.15222, abs=1e-5)


def test_payoff_derivatives_degenerate_cases(base):
    assert payoff_derivatives_rn(base.replace(lam=0.0)) == (0.0, -0.0)
    assert payoff_derivatives_rn(base.replace(phi2=0.0))[0] == 0.0
    with pytest.raises(DegenerateCase):
        payoff_derivatives_rn(base.replace(phi1=0.0, phi2=0.0))


unit = st.floats(0.0, 1.0)
open_unit = st.floats(0.001, 0.999)


@st.composite
def financeable(draw, phi1=st.floats(0.001, 1.0)):
    p = DEFAULT_PARAMS.replace(
        R=draw(st.floats(1.0, 1.3)), lam=draw(open_unit), phi1=draw(phi1), phi2=draw(unit),
        y1=draw(st.floats(0, 40)), y2=draw(st.floats(0, 40)), omega=draw(st.floats(0, 5)),
        I=draw(st.floats(0.1, 10)),
    )
    p = p.replace(W=p.I + 5)
    try:
        solve_equity_rn(p)
    except CannotFinance:
        assume(False)
    return p


@given(financeable())
def test_tokens_dominate_equity(p):
    assert solve_token_rn(p).payoff > solve_equity_rn(p).payoff


@given(financeable(), unit)
def test_token_payoff_between_equity_and_bond(p, phi1):
    p = p.replace(phi1=phi1, phi2=1.0)
    pay = solve_token_rn(p).payoff
    tol = 1e-9 * max(1.0, abs(pay))
    assert solve_equity_rn(p).payoff - tol <= pay <= bond_benchmark(p) + tol


@given(st.floats(1.0, 1.3), open_unit, unit, unit, st.floats(0.0, 0.2))
def test_price_monotone_in_liquidity_and_lambda(R, lam, phi1, phi2, dx):
    p = DEFAULT_PARAMS.replace(R=R, lam=lam, phi1=phi1, phi2=phi2)
    assume(token_price_rn(p) > 1e-12)
    p0 = solve_token_rn(p).p0
    assert solve_token_rn(p.replace(phi1=min(1.0, phi1 + dx))).p0 >= p0 * (1 - 1e-15)
    assert solve_token_rn(p.replace(phi2=min(1.0, phi2 + dx))).p0 >= p0 * (1 - 1e-15)
    if phi1 > 0:
        assert solve_token_rn(p.replace(lam=min(1.0, lam + dx))).p0 <= p0 * (1 + 1e-15)


@given(financeable(phi1=st.floats(0.01, 0.99)).filter(lambda p: 0.01 < p.phi2 < 0.99))
def test_derivatives_match_central_differences(p):
    d = payoff_derivatives_rn(p)
    h = 1e-6
    for i, name in enumerate(("phi1", "phi2")):
        x = getattr(p, name)
        fd = (solve_token_rn(p.replace(**{name: x + h})).payoff
              - solve_token_rn(p.replace(**{name: x - h})).payoff) / (2 * h)
        # rounding in the difference is ~eps * payoff / h
        assert abs(fd - d[i]) <= 1e-6 * abs(d[i]) + 1e-8 * max(1.0, abs(solve_token_rn(p).payoff))
    assert d[0] >= 0 >= d[1]


@given(financeable())
def test_payoff_factored_forms_agree(p):
    profit = (p.y1 - p.omega) * p.R + p.y2 - p.omega
    sol = solve_token_rn(p)
    assert sol.payoff == pytest.approx(profit - resale_weight(p) * sol.t0, rel=1e-9, abs=1e-9)
    eq = solve_equity_rn(p)
    assert eq.payoff == pytest.approx((1 - eq.e) * profit, rel=1e-9, abs=1e-9)
