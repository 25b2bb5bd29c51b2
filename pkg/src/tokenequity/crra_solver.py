"""CRRA equilibria as one-dimensional fixed points.

The price an investor pays depends on how smooth his consumption is, which
depends on how much of the asset he holds, which depends on the price.  With
B0 pinned to W - I, each equilibrium reduces to one unknown: the equity
share e, or the token price p0.  Both are found by a sign-change scan over
the bracket followed by bisection on h(x) = x - g(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_form import resale_weight, solve_equity_rn, solve_token_rn
from .errors import (
    CannotFinance,
    ConvergenceFailure,
    DegenerateCase,
    DomainError,
    IlliquidToken,
    ModelError,
    NoEquilibrium,
)
from .model_core import ModelParams, future_profit, validate_params

# Above this, c^sigma terms are handled through their logarithm.
_LOG_SPACE_THRESHOLD = 200.0
_SCAN_POINTS = 129


@dataclass(frozen=True)
class FixedPointConfig:
    tol: float = 1e-12
    max_iter: int = 200
    bracket_lo: float | None = None
    bracket_hi: float | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")
        if (
            self.bracket_lo is not None
            and self.bracket_hi is not None
            and not self.bracket_lo < self.bracket_hi
        ):
            raise DomainError("bracket_lo must be < bracket_hi")


@dataclass(frozen=True)
class FixedPointDiagnostics:
    iterations: int
    residual: float
    bracket: tuple[float, float]
    multiple_roots: bool = False


@dataclass(frozen=True)
class CrraEquitySolution:
    q_a: float
    e_a: float
    r_equity_a: float
    payoff: float
    c1: float
    c2: float
    risk_premium_factor: float
    diagnostics: FixedPointDiagnostics

    asset = "equity"

    @property
    def price(self) -> float:
        return self.q_a

    @property
    def quantity(self) -> float:
        return self.e_a

    @property
    def required_return(self) -> float:
        return self.r_equity_a


@dataclass(frozen=True)
class CrraTokenSolution:
    p0_a: float
    t0: float
    r_token_a: float
    payoff: float
    c1: float
    c2: float
    smoothing_ratio: float
    diagnostics: FixedPointDiagnostics

    asset = "token"

    @property
    def price(self) -> float:
        return self.p0_a

    @property
    def quantity(self) -> float:
        return self.t0

    @property
    def required_return(self) -> float:
        return self.r_token_a


def crra_utility(c, sigma: float):
    """(c^(1-sigma) - 1)/(1 - sigma), log(c) at sigma = 1.  Accepts arrays."""
    arr = np.asarray(c, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("CRRA utility needs positive consumption")
    if sigma == 1.0:
        out = np.log(arr)
    else:
        out = np.expm1((1.0 - sigma) * np.log(arr)) / (1.0 - sigma)
    return float(out) if out.ndim == 0 else out


def _premium_factor(ratio: float, lam: float, sigma: float) -> float:
    """lam * ratio^sigma + 1 - lam, where ratio = c2/c1."""
    z = sigma * math.log(ratio)
    if abs(z) > _LOG_SPACE_THRESHOLD:
        if lam == 0.0:
            return 1.0
        log_term = z + math.log(lam)
        if log_term > 709.0:
            return math.inf
        return math.exp(log_term) + (1.0 - lam)
    return lam * math.exp(z) + (1.0 - lam)


def _smoothing_ratio(ratio: float, lam: float, sigma: float) -> float:
    """c1^s / (lam c2^s + (1-lam) c1^s) = 1 / premium factor."""
    return 1.0 / _premium_factor(ratio, lam, sigma)


def _bisect(h: Callable[[float], float], lo: float, hi: float, h_lo: float, cfg: FixedPointConfig):
    """Bisection on a sign change; returns (root, residual, iterations)."""
    for it in range(1, cfg.max_iter + 1):
        mid = 0.5 * (lo + hi)
        h_mid = h(mid)
        if abs(h_mid) <= cfg.tol:
            return mid, h_mid, it
        if mid == lo or mid == hi:
            break
        if (h_mid < 0) == (h_lo < 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    raise ConvergenceFailure(
        f"bisection stopped after {it} steps with residual {h_mid:.3e} > tol {cfg.tol:.1e}"
    )


def _golden_max(f: Callable[[float], float], a: float, b: float, iters: int = 100):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _solve_fixed_point(h, lo: float, hi: float, cfg: FixedPointConfig, from_top: bool):
    """Find the admissible root of h on [lo, hi].

    Roots are located by a uniform scan.  ``from_top`` chooses the root
    nearest ``hi`` instead of nearest ``lo``.  A scan without sign changes
    is refined by maximising |h| toward zero between grid points, which
    catches a pair of roots sitting inside one scan cell.
    """
    xs = np.linspace(lo, hi, _SCAN_POINTS)
    hs = np.array([h(float(x)) for x in xs])
    exact = np.flatnonzero(hs == 0.0)
    sign = np.sign(hs)
    changes = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    n_roots = len(changes) + len(exact)
    if n_roots == 0:
        # two roots may hide inside one cell: probe the extremum facing zero
        k = int(np.argmax(hs)) if hs[0] < 0 else int(np.argmin(hs))
        a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
        flip = 1.0 if hs[0] < 0 else -1.0
        x_ext, f_ext = _golden_max(lambda x: flip * h(x), float(a), float(b))
        if f_ext <= 0:
            raise NoEquilibrium(
                f"fixed-point residual has no sign change on [{lo:.3g}, {hi:.3g}]"
            )
        if from_top:
            seg_lo, seg_hi = x_ext, float(b)
        else:
            seg_lo, seg_hi = float(a), x_ext
        n_roots = 2
    else:
        candidates = sorted(
            [(float(xs[i]), float(xs[i]), True) for i in exact]
            + [(float(xs[i]), float(xs[i + 1]), False) for i in changes]
        )
        seg_lo, seg_hi, is_exact = candidates[-1] if from_top else candidates[0]
        if is_exact:
            return seg_lo, 0.0, 0, (seg_lo, seg_hi), n_roots > 1
    h_lo = h(seg_lo)
    if h_lo == 0.0:
        return seg_lo, 0.0, 0, (seg_lo, seg_hi), n_roots > 1
    root, res, it = _bisect(h, seg_lo, seg_hi, h_lo, cfg)
    return root, res, it, (seg_lo, seg_hi), n_roots > 1


def equity_residual(params: ModelParams, e: float) -> float:
    """e - I R^2 [lam (c2/c1)^sigma + 1 - lam] / ((1-lam) Pi), with c1, c2 at share e."""
    R, lam, I = params.R, params.lam, params.I
    pi = future_profit(params)
    b0 = params.bond_holding
    c1 = b0 * R
    c2 = b0 * R**2 + e * pi
    if c2 <= 0:
        return -math.inf
    factor = _premium_factor(c2 / c1, lam, params.sigma)
    return e - I * R**2 * factor / ((1.0 - lam) * pi)


def solve_equity_crra(params: ModelParams, cfg: FixedPointConfig = FixedPointConfig()) -> CrraEquitySolution:
    validate_params(params)
    R, lam, I, sigma = params.R, params.lam, params.I, params.sigma
    if lam == 1.0:
        raise DegenerateCase("lambda = 1: no investor ever values equity")
    pi = future_profit(params)
    if pi <= 0:
        raise CannotFinance(f"profit {pi:.6g} is not positive; equity is worthless")
    lo = 1e-9 if cfg.bracket_lo is None else cfg.bracket_lo
    hi = 1.0 if cfg.bracket_hi is None else cfg.bracket_hi
    if not 0.0 < lo < hi <= 1.0:
        raise DomainError(f"equity share bracket must lie in (0, 1], got [{lo}, {hi}]")
    try:
        e, res, it, bracket, multi = _solve_fixed_point(
            lambda x: equity_residual(params, x), lo, hi, cfg, from_top=False
        )
    except NoEquilibrium as exc:
        raise NoEquilibrium(f"equity cannot finance I={I:.6g} at sigma={sigma:.6g}: {exc}") from None
    b0 = params.bond_holding
    c1 = b0 * R
    c2 = b0 * R**2 + e * pi
    factor = _premium_factor(c2 / c1, lam, sigma)
    q = I / e
    return CrraEquitySolution(
        q_a=q,
        e_a=e,
        r_equity_a=pi / q,
        payoff=pi - I * R**2 / (1.0 - lam) * factor,
        c1=c1,
        c2=c2,
        risk_premium_factor=factor,
        diagnostics=FixedPointDiagnostics(it, res, bracket, multi),
    )


def _token_consumption(params: ModelParams, p0: float) -> tuple[float, float]:
    t0 = params.I / p0
    c1 = params.bond_holding * params.R + params.phi1 * t0
    c2 = c1 * params.R + params.phi2 * (1.0 - params.phi1) * t0
    return c1, c2


def token_residual(params: ModelParams, p0: float) -> float:
    """p0 - [phi1/R + (1-lam) phi2 (1-phi1)/R^2 * smoothing ratio] at price p0."""
    R, lam, phi1, phi2 = params.R, params.lam, params.phi1, params.phi2
    c1, c2 = _token_consumption(params, p0)
    ratio = _smoothing_ratio(c2 / c1, lam, params.sigma)
    return p0 - (phi1 / R + (1.0 - lam) * phi2 * (1.0 - phi1) / R**2 * ratio)


def solve_token_crra(params: ModelParams, cfg: FixedPointConfig = FixedPointConfig()) -> CrraTokenSolution:
    validate_params(params)
    R, lam, phi1, phi2, I, sigma = params.R, params.lam, params.phi1, params.phi2, params.I, params.sigma
    if phi1 == 0.0 and (phi2 == 0.0 or lam == 1.0):
        raise IlliquidToken(f"token price is zero (phi1={phi1}, phi2={phi2}, lambda={lam})")
    lo = 1e-9 if cfg.bracket_lo is None else cfg.bracket_lo
    hi = 1.0 / R + 1.0 if cfg.bracket_hi is None else cfg.bracket_hi
    if not 0.0 < lo < hi:
        raise DomainError(f"token price bracket must be positive, got [{lo}, {hi}]")
    # with phi1 > 0 the residual is negative at lo and a root always exists;
    # with phi1 = 0 the token is equity-like and can fail the same way
    try:
        p0, res, it, bracket, multi = _solve_fixed_point(
            lambda x: token_residual(params, x), lo, hi, cfg, from_top=True
        )
    except NoEquilibrium as exc:
        raise NoEquilibrium(f"token cannot finance I={I:.6g} at sigma={sigma:.6g}: {exc}") from None
    t0 = I / p0
    c1, c2 = _token_consumption(params, p0)
    return CrraTokenSolution(
        p0_a=p0,
        t0=t0,
        r_token_a=1.0 / p0,
        payoff=future_profit(params) - resale_weight(params) * t0,
        c1=c1,
        c2=c2,
        smoothing_ratio=_smoothing_ratio(c2 / c1, lam, sigma),
        diagnostics=FixedPointDiagnostics(it, res, bracket, multi),
    )


def solve_equity(params: ModelParams, cfg: FixedPointConfig = FixedPointConfig()):
    """Closed form at sigma = 0, fixed point otherwise."""
    return solve_equity_rn(params) if params.sigma == 0 else solve_equity_crra(params, cfg)


def solve_token(params: ModelParams, cfg: FixedPointConfig = FixedPointConfig()):
    return solve_token_rn(params) if params.sigma == 0 else solve_token_crra(params, cfg)


def payoff_pair(params: ModelParams, cfg: FixedPointConfig = FixedPointConfig()) -> tuple[float, float]:
    """(equity payoff, token payoff) at one parameter point."""
    out = []
    for leg, solve in (("equity", solve_equity), ("token", solve_token)):
        try:
            out.append(solve(params, cfg).payoff)
        except ModelError as exc:
            err = type(exc)(f"{leg} leg: {exc}")
            err.leg = leg
            raise err from exc
    return out[0], out[1]
