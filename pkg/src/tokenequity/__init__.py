"""Equilibrium solver for a three-period model of token versus equity startup financing."""

from .closed_form import (
    EquitySolution,
    TokenSolution,
    bond_benchmark,
    payoff_derivatives_rn,
    solve_equity_rn,
    solve_token_rn,
)
from .crra_solver import (
    CrraEquitySolution,
    CrraTokenSolution,
    FixedPointConfig,
    crra_utility,
    payoff_pair,
    solve_equity_crra,
    solve_token_crra,
)
from .errors import (
    BracketError,
    CannotFinance,
    ConvergenceFailure,
    DegenerateCase,
    DomainError,
    IlliquidToken,
    ModelError,
    NoEquilibrium,
    ParseError,
)
from .model_core import DEFAULT_PARAMS, ModelParams, future_profit, validate_params
from .sweep import GridSpec, SweepRow, figure1_data, find_crossing, sweep_1d, sweep_2d

__version__ = "0.1.0"
