"""Exogenous parameters of the three-period token-vs-equity financing model.

All prices are in units of the generic good (numeraire).  The discount
factor is always ``1/R`` and post-launch token prices are fixed at 1, so
neither appears as a parameter.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import DomainError

# Post-launch token prices; users redeem one token for one unit of the good.
P1 = 1.0
P2 = 1.0

# Config/CLI name of each field.  ``lambda`` is a keyword, hence ``lam``.
PARAM_NAMES = ("R", "lambda", "phi1", "phi2", "y1", "y2", "omega", "I", "W", "sigma")
_FIELD_OF = {name: ("lam" if name == "lambda" else name) for name in PARAM_NAMES}


@dataclass(frozen=True)
class ModelParams:
    R: float = 1.05
    lam: float = 0.1
    phi1: float = 0.5
    phi2: float = 1.0
    y1: float = 10.0
    y2: float = 10.0
    omega: float = 2.0
    I: float = 5.0
    W: float = 10.0
    sigma: float = 0.0

    @property
    def beta(self) -> float:
        return 1.0 / self.R

    @property
    def bond_holding(self) -> float:
        """B0 = W - I, pinned by the t=0 budget once the issue is absorbed."""
        return self.W - self.I

    def replace(self, **changes) -> "ModelParams":
        """Copy with changes; accepts config names (``lambda=0.2``) too."""
        return replace(self, **{_FIELD_OF.get(k, k): float(v) for k, v in changes.items()})

    def as_dict(self) -> dict:
        """Values keyed by their config names, in canonical order."""
        d = asdict(self)
        return {name: d[_FIELD_OF[name]] for name in PARAM_NAMES}

    @classmethod
    def from_dict(cls, values: dict) -> "ModelParams":
        return cls().replace(**values)


@dataclass(frozen=True)
class DerivedQuantities:
    pi: float
    beta: float


DEFAULT_PARAMS = ModelParams()


def validate_params(raw: ModelParams) -> ModelParams:
    """Return ``raw`` unchanged if every bound holds, else raise DomainError."""
    for f in fields(raw):
        v = getattr(raw, f.name)
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise DomainError(f"{f.name} must be a finite number, got {v!r}")
    if not 0.0 <= raw.lam <= 1.0:
        raise DomainError(f"lambda out of [0,1]: {raw.lam}")
    if not 0.0 <= raw.phi1 <= 1.0:
        raise DomainError(f"phi1 out of [0,1]: {raw.phi1}")
    if not 0.0 <= raw.phi2 <= 1.0:
        raise DomainError(f"phi2 out of [0,1]: {raw.phi2}")
    if raw.R < 1.0:
        raise DomainError(f"R must be >= 1, got {raw.R}")
    if raw.y1 < 0.0 or raw.y2 < 0.0:
        raise DomainError(f"outputs must be >= 0, got y1={raw.y1}, y2={raw.y2}")
    if raw.omega < 0.0:
        raise DomainError(f"omega must be >= 0, got {raw.omega}")
    if raw.I <= 0.0:
        raise DomainError(f"I must be > 0, got {raw.I}")
    if raw.W <= raw.I:
        raise DomainError(f"W must exceed I (W={raw.W}, I={raw.I})")
    if raw.sigma < 0.0:
        raise DomainError(f"sigma must be >= 0, got {raw.sigma}")
    return raw


def future_profit(params: ModelParams) -> float:
    """Value at t=2 of the venture's operating profit, (y1-omega)R + y2 - omega."""
    return (params.y1 - params.omega) * params.R + (params.y2 - params.omega)


def derived(params: ModelParams) -> DerivedQuantities:
    return DerivedQuantities(pi=future_profit(params), beta=params.beta)
