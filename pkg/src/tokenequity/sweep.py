"""Comparative statics over one-dimensional parameter grids."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .crra_solver import FixedPointConfig, solve_equity, solve_token
from .errors import DomainError, ModelError
from .model_core import ModelParams, validate_params

SWEEPABLE = ("lambda", "phi1", "phi2", "sigma", "R", "I", "W", "y1", "y2", "omega")
CSV_HEADER = (
    "grid_value",
    "equity_price",
    "token_price",
    "equity_return",
    "token_return",
    "equity_payoff",
    "token_payoff",
    "payoff_diff",
    "flags",
)
CROSSING_COLUMNS = ("payoff_diff", "equity_payoff", "token_payoff")


@dataclass(frozen=True)
class GridSpec:
    param_name: str
    lo: float
    hi: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.param_name not in SWEEPABLE:
            raise DomainError(f"cannot sweep {self.param_name!r}; choose from {', '.join(SWEEPABLE)}")
        if not self.lo < self.hi:
            raise DomainError(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise DomainError(f"grid needs at least 2 steps, got {self.steps}")
        if self.scale != "linear":
            raise DomainError(f"only linear grids are supported, got {self.scale!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass
class SweepRow:
    grid_value: float
    equity_price: float | None = None
    token_price: float | None = None
    equity_return: float | None = None
    token_return: float | None = None
    equity_payoff: float | None = None
    token_payoff: float | None = None
    payoff_diff: float | None = None
    flags: list = field(default_factory=list)


def evaluate_point(params: ModelParams, cfg: FixedPointConfig, grid_value: float) -> SweepRow:
    """Both financing legs at one parameter point; failures become flags."""
    row = SweepRow(grid_value=float(grid_value))
    try:
        validate_params(params)
    except DomainError:
        row.flags.append("params:DomainError")
        return row
    for leg, solve in (("equity", solve_equity), ("token", solve_token)):
        try:
            sol = solve(params, cfg)
        except ModelError as exc:
            row.flags.append(f"{leg}:{type(exc).__name__}")
            continue
        setattr(row, f"{leg}_price", sol.price)
        setattr(row, f"{leg}_return", sol.required_return)
        setattr(row, f"{leg}_payoff", sol.payoff)
        for w in getattr(sol, "warnings", ()):
            row.flags.append(f"{leg}:{w}")
        diag = getattr(sol, "diagnostics", None)
        if diag is not None and diag.multiple_roots:
            row.flags.append(f"{leg}:MultipleRoots")
    if row.equity_payoff is not None and row.token_payoff is not None:
        row.payoff_diff = row.token_payoff - row.equity_payoff
    return row


def _point(base: ModelParams, name: str, cfg: FixedPointConfig, value: float) -> SweepRow:
    return evaluate_point(base.replace(**{name: value}), cfg, value)


def sweep_1d(base: ModelParams, grid: GridSpec, cfg: FixedPointConfig = FixedPointConfig(),
             workers: int = 1) -> list[SweepRow]:
    """One row per grid value, in grid order.

    sigma = 0 points go through the closed forms.  With ``workers > 1``
    points are solved in separate processes; the result is identical.
    """
    validate_params(base)
    job = partial(_point, base, grid.param_name, cfg)
    values = [float(v) for v in grid.values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, values))
    return [job(v) for v in values]


def sweep_2d(base: ModelParams, outer: GridSpec, inner: GridSpec,
             cfg: FixedPointConfig = FixedPointConfig(), workers: int = 1) -> list[list[SweepRow]]:
    """Rows indexed [outer value][inner value]; each inner row's grid_value is the inner value."""
    if outer.param_name == inner.param_name:
        raise DomainError("2-D sweep needs two different parameters")
    out = []
    for v in outer.values():
        point = base.replace(**{outer.param_name: float(v)})
        try:
            validate_params(point)
        except DomainError:
            out.append([SweepRow(float(x), flags=["params:DomainError"]) for x in inner.values()])
            continue
        out.append(sweep_1d(point, inner, cfg, workers))
    return out


def figure1_data(base: ModelParams, sigma_grid: GridSpec | None = None,
                 cfg: FixedPointConfig = FixedPointConfig()) -> list[SweepRow]:
    """Equity and token payoffs against sigma at lambda = 0.1."""
    if sigma_grid is None:
        sigma_grid = GridSpec("sigma", 0.0, 5.0, 21)
    if sigma_grid.param_name != "sigma":
        raise DomainError("the payoff figure sweeps sigma")
    return sweep_1d(base.replace(lam=0.1), sigma_grid, cfg)


def find_crossing(rows: list[SweepRow], column: str = "payoff_diff", level: float = 0.0) -> list[tuple]:
    """Consecutive row pairs whose ``column`` straddles ``level``.

    Returns ``(i, i + 1, x)`` with ``x`` the linearly interpolated grid
    value.  A row sitting exactly on ``level`` counts once, as the end of
    the pair that reached it.  Pairs with a missing value are skipped.
    """
    if column not in CROSSING_COLUMNS:
        raise DomainError(f"column must be one of {CROSSING_COLUMNS}, got {column!r}")
    out = []
    for i in range(len(rows) - 1):
        a, b = getattr(rows[i], column), getattr(rows[i + 1], column)
        if a is None or b is None:
            continue
        d0, d1 = a - level, b - level
        if (d0 < 0 <= d1) or (d0 > 0 >= d1):
            x0, x1 = rows[i].grid_value, rows[i + 1].grid_value
            x = x1 if d1 == 0 else x0 + (x1 - x0) * d0 / (d0 - d1)
            out.append((i, i + 1, x))
    return out


def feasibility_boundary(base: ModelParams, leg: str, name: str, lo: float, hi: float,
                         cfg: FixedPointConfig = FixedPointConfig(), tol: float = 1e-8) -> float:
    """Bisect for the ``name`` value where ``leg`` stops solving.

    Needs the leg to solve at ``lo`` and fail at ``hi``.
    """
    solve = {"equity": solve_equity, "token": solve_token}[leg]

    def ok(v):
        try:
            solve(base.replace(**{name: v}), cfg)
            return True
        except ModelError:
            return False

    if not ok(lo) or ok(hi):
        raise DomainError(f"{leg} must solve at {name}={lo} and fail at {name}={hi}")
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo
