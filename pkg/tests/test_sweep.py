import numpy as np
import pytest

from tokenequity.checks import random_financeable_params
from tokenequity.closed_form import solve_equity_rn, solve_token_rn
from tokenequity.crra_solver import FixedPointConfig, solve_equity_crra
from tokenequity.errors import DomainError
from tokenequity.model_core import DEFAULT_PARAMS
from tokenequity.sweep import (
    GridSpec,
    SweepRow,
    evaluate_point,
    feasibility_boundary,
    figure1_data,
    find_crossing,
    sweep_1d,
    sweep_2d,
)


@pytest.fixture(scope="module")
def fig_rows():
    return figure1_data(DEFAULT_PARAMS)


def rows_for(values, column="payoff_diff"):
    return [SweepRow(float(i), **{column: v}) for i, v in enumerate(values)]


def test_grid_spec_validation():
    assert GridSpec("sigma", 0, 5, 21).values()[1] == pytest.approx(0.25)
    for bad in [("beta", 0, 1, 3), ("sigma", 1, 1, 3), ("sigma", 0, 1, 1), ("sigma", 0, 1, 3, "log")]:
        with pytest.raises(DomainError):
            GridSpec(*bad)


def test_rows_follow_grid_order(base):
    grid = GridSpec("phi2", 0.1, 1.0, 10)
    rows = sweep_1d(base, grid)
    assert [r.grid_value for r in rows] == list(grid.values())


def test_parallel_sweep_is_identical(base):
    grid = GridSpec("sigma", 0.0, 3.0, 7)
    assert sweep_1d(base, grid, workers=2) == sweep_1d(base, grid)


def test_sigma_zero_rows_are_closed_forms(base):
    for r in sweep_1d(base, GridSpec("lambda", 0.0, 0.5, 11)):
        p = base.replace(lam=r.grid_value)
        eq, tok = solve_equity_rn(p), solve_token_rn(p)
        assert (r.equity_price, r.equity_return, r.equity_payoff) == (eq.q, eq.r_equity, eq.payoff)
        assert (r.token_price, r.token_return, r.token_payoff) == (tok.p0, tok.r_token, tok.payoff)
        assert r.payoff_diff == tok.payoff - eq.payoff


def test_token_payoff_nonincreasing_in_lambda(base):
    pay = [r.token_payoff for r in sweep_1d(base, GridSpec("lambda", 0.0, 0.5, 26))]
    assert all(b <= a for a, b in zip(pay, pay[1:]))


def test_token_advantage_vanishes_as_phi1_falls(base):
    rows = sweep_1d(base.replace(phi2=1.0), GridSpec("phi1", 0.01, 1.0, 34))
    diffs = [r.payoff_diff for r in rows]
    assert min(diffs) >= 0
    assert all(b >= a for a, b in zip(diffs, diffs[1:]))
    assert evaluate_point(base.replace(phi1=0.0), FixedPointConfig(), 0.0).payoff_diff == pytest.approx(0, abs=1e-12)


def test_failed_leg_does_not_abort_sweep(base):
    rows = sweep_1d(base, GridSpec("I", 1.0, 9.0, 9))
    assert len(rows) == 9
    assert all(r.token_payoff is not None for r in rows)
    # q = 13.39 and W must exceed I, so every row finances; push I past q instead
    rows = sweep_1d(base.replace(W=20.0), GridSpec("I", 12.0, 16.0, 5))
    assert any("equity:CannotFinance" in r.flags for r in rows)
    assert all(r.token_payoff is not None for r in rows)


def test_invalid_point_is_flagged(base):
    rows = sweep_1d(base, GridSpec("W", 4.0, 6.0, 3))
    assert rows[0].flags == ["params:DomainError"]
    assert rows[0].equity_payoff is None and rows[2].equity_payoff is not None


def test_figure_spot_values(fig_rows):
    assert len(fig_rows) == 21
    at0, at2 = fig_rows[0], fig_rows[8]
    assert at2.grid_value == 2.0
    assert (at0.equity_payoff, at0.token_payoff) == pytest.approx((10.2750, 10.60481), abs=1e-4)
    assert at0.payoff_diff == pytest.approx(0.3298, abs=1e-4)
    assert (at2.equity_payoff, at2.token_payoff) == pytest.approx((2.5942, 10.3541), abs=1e-3)


def test_figure_shape(fig_rows):
    tok = [r.token_payoff for r in fig_rows]
    eq = [r.equity_payoff for r in fig_rows if r.equity_payoff is not None]
    assert None not in tok
    assert all(b <= a for a, b in zip(tok, tok[1:]))
    assert all(b <= a for a, b in zip(eq, eq[1:]))
    assert all(r.payoff_diff >= 0 for r in fig_rows if r.payoff_diff is not None)
    assert eq[0] - eq[-1] > tok[0] - tok[-1]


def test_figure_equity_stops_past_threshold(fig_rows):
    solved = [r.grid_value for r in fig_rows if r.equity_payoff is not None]
    assert solved == [0.25 * k for k in range(9)]
    assert all(r.flags == ["equity:NoEquilibrium"] for r in fig_rows[9:])


def test_figure_forces_lambda(base):
    rows = figure1_data(base.replace(lam=0.4), GridSpec("sigma", 0.0, 1.0, 2))
    assert rows[0].token_payoff == solve_token_rn(base).payoff
    with pytest.raises(DomainError):
        figure1_data(base, GridSpec("phi1", 0.1, 1.0, 2))


def test_feasibility_boundary(base):
    s = feasibility_boundary(base, "equity", "sigma", 2.0, 2.25)
    assert s == pytest.approx(2.0141121596, abs=1e-7)
    solve_equity_crra(base.replace(sigma=s))
    with pytest.raises(DomainError):
        feasibility_boundary(base, "equity", "sigma", 2.25, 3.0)


def test_find_crossing_cases():
    assert find_crossing(rows_for([1.0, 1.0, 1.0])) == []
    assert find_crossing(rows_for([2.0, 1.0, -1.0])) == [(1, 2, 1.5)]
    # a point on the level is counted once
    assert find_crossing(rows_for([1.0, 0.0, -1.0])) == [(0, 1, 1.0)]
    assert find_crossing(rows_for([-1.0, None, 1.0, 3.0]), level=2.0) == [(2, 3, 2.5)]
    assert find_crossing(rows_for([3.0, 1.0], "equity_payoff"), "equity_payoff", 2.0) == [(0, 1, 0.5)]
    with pytest.raises(DomainError):
        find_crossing(rows_for([1.0]), "flags")


def test_equity_payoff_stays_positive_where_it_exists(fig_rows):
    # equity stops financing before its payoff can reach zero
    assert find_crossing(fig_rows, "equity_payoff", 0.0) == []
    assert find_crossing(fig_rows) == []


def test_token_always_ahead_on_random_points():
    diffs = []
    for p in random_financeable_params(1000, seed=7):
        diffs.append(evaluate_point(p, FixedPointConfig(), 0.0).payoff_diff)
    assert np.min(diffs) > 0


def test_sweep_2d_matches_1d(base):
    table = sweep_2d(base, GridSpec("lambda", 0.0, 0.4, 3), GridSpec("phi1", 0.1, 0.9, 5))
    assert [len(r) for r in table] == [5, 5, 5]
    assert table[1] == sweep_1d(base.replace(lam=0.2), GridSpec("phi1", 0.1, 0.9, 5))
    with pytest.raises(DomainError):
        sweep_2d(base, GridSpec("phi1", 0, 1, 2), GridSpec("phi1", 0, 1, 2))


def test_sweep_2d_flags_invalid_outer_point(base):
    table = sweep_2d(base, GridSpec("W", 4.0, 6.0, 3), GridSpec("phi1", 0.1, 0.9, 2))
    assert all(r.flags == ["params:DomainError"] for r in table[0])
    assert all(r.token_payoff is not None for r in table[2])
