"""Model parameters, standing-assumption checks, and discounted-price moments.

All rates are per year (the math itself is unit-agnostic; one year is just
the documented convention). The LST price follows a geometric Brownian
motion dP/P = g dt + sigma dB with initial price p0, and withdrawing from
the staking protocol applies the exit discount e^{-m t}.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path


class TokenKind(enum.Enum):
    REBASING = "rebasing"
    REWARD_BEARING = "reward_bearing"


_PARAM_KEYS = ("g", "sigma", "r", "m", "rho", "p0", "fee_cap_k", "token_kind")


@dataclass(frozen=True)
class ModelParams:
    """Market and protocol scalars.

    g: LST price growth rate, sigma: price volatility, r: staking reward
    rate, m: exit-discount rate, rho: investor discount rate, p0: initial
    LST price in ETH, fee_cap_k: dimensionless fee-cap constant.
    """

    g: float
    sigma: float
    r: float
    m: float
    rho: float
    p0: float
    fee_cap_k: float
    token_kind: TokenKind

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.m <= 0:
            raise ValueError("m must be positive")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.p0 <= 0:
            raise ValueError("p0 must be positive")
        if self.fee_cap_k <= 0:
            raise ValueError("fee_cap_k must be positive")
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.r < 0:
            raise ValueError("r must be non-negative")
        # Rebasing tokens peg to ETH and pay rewards in quantity; reward-
        # bearing tokens pay rewards through price growth. The two fee
        # schedules differ, so the coupling is enforced at construction.
        if self.token_kind is TokenKind.REBASING:
            if self.p0 != 1.0:
                raise ValueError("rebasing tokens require p0 = 1")
            if self.g != 0.0:
                raise ValueError("rebasing tokens require g = 0")
            if self.r <= 0.0:
                raise ValueError("rebasing tokens require r > 0")
        else:
            if self.p0 <= 1.0:
                raise ValueError("reward-bearing tokens require p0 > 1")
            if self.g <= 0.0:
                raise ValueError("reward-bearing tokens require g > 0")
            if self.r != 0.0:
                raise ValueError("reward-bearing tokens require r = 0")

    @property
    def d(self) -> float:
        """Drift-adjusted slope sigma/2 - g/sigma of the hitting boundary."""
        return self.sigma / 2.0 - self.g / self.sigma

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        unknown = set(data) - set(_PARAM_KEYS)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        missing = set(_PARAM_KEYS) - set(data)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        try:
            kind = TokenKind(data["token_kind"])
        except ValueError:
            raise ValueError(
                f"token_kind must be 'rebasing' or 'reward_bearing', "
                f"got {data['token_kind']!r}"
            ) from None
        fields = {k: float(data[k]) for k in _PARAM_KEYS if k != "token_kind"}
        return cls(token_kind=kind, **fields)

    @classmethod
    def from_json(cls, path: str | Path) -> "ModelParams":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("parameter file must contain a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in _PARAM_KEYS if k != "token_kind"}
        out["token_kind"] = self.token_kind.value
        return out


@dataclass(frozen=True)
class DerivedCoefficients:
    d: float


def derived_coefficients(params: ModelParams) -> DerivedCoefficients:
    return DerivedCoefficients(d=params.d)


def check_staking_incentive(params: ModelParams) -> bool:
    """Whether staking through the protocol beats holding in expectation.

    Requires r + g - rho - m > ln p0, with ln p0 >= 0. Equality at
    ln p0 = 0 (the rebasing case p0 = 1) is admitted; the strict-positivity
    boundary is reported by the CLI rather than rejected here.
    """
    ln_p0 = math.log(params.p0)
    return (params.r + params.g - params.rho - params.m > ln_p0) and ln_p0 >= 0.0


# Identifiers for the four exit-timing well-posedness conditions, in the
# order they are checked.
ASSUMPTION_IDS = (
    "dsq_gt_two_reward_gap",
    "dsq_gt_fee_gap",
    "d_positive",
    "sigma_sq_quarter_gt_m",
)


def check_exit_assumptions(params: ModelParams) -> list[str]:
    """Return identifiers of violated exit-timing assumptions (empty = ok)."""
    g, r, m, rho, sigma = params.g, params.r, params.m, params.rho, params.sigma
    d = params.d
    violations = []
    if not d * d - 2.0 * (g + r - m - rho) > 0.0:
        violations.append("dsq_gt_two_reward_gap")
    if not d * d - (g - sigma**2 / 4.0 - m - 2.0 * rho) > 0.0:
        violations.append("dsq_gt_fee_gap")
    if not d > 0.0:
        violations.append("d_positive")
    if not sigma**2 / 4.0 - m > 0.0:
        violations.append("sigma_sq_quarter_gt_m")
    return violations


def expected_discounted_price(params: ModelParams, t: float) -> float:
    """E[D_t P_t] = p0 * exp((g - m) t)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return params.p0 * math.exp((params.g - params.m) * t)


def expected_sqrt_discounted_price(params: ModelParams, t: float) -> float:
    """E[sqrt(D_t P_t)] = sqrt(p0) * exp((g/2 - sigma^2/8 - m/2) t)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    exponent = params.g / 2.0 - params.sigma**2 / 8.0 - params.m / 2.0
    return math.sqrt(params.p0) * math.exp(exponent * t)


def expected_sqrt_price_gap_sq(params: ModelParams, t: float) -> float:
    """E[(sqrt(D_t P_t) - sqrt(p0))^2], assembled from the two moments."""
    sqrt_p0 = math.sqrt(params.p0)
    return (
        expected_discounted_price(params, t)
        - 2.0 * sqrt_p0 * expected_sqrt_discounted_price(params, t)
        + params.p0
    )
