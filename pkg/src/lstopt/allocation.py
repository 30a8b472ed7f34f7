"""Time-zero allocation across holding, staking, and liquidity provision.

The allocation problem is linear in the deposit size x and the held
fraction a once y = p0 * x is substituted, so the optimum sits at a
vertex: either full participation (a = 1/2, x = 1/(2 p0)) or inaction.
Which vertex wins is decided by comparing the cumulative discounted fee
against the threshold phi_threshold(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .market import (
    ModelParams,
    TokenKind,
    check_staking_incentive,
    expected_sqrt_price_gap_sq,
)


@dataclass(frozen=True)
class AllocationDecision:
    a_hold: float  # ETH fraction held outside the protocol
    x_lp_lst: float  # LST units supplied to the pool
    y_lp_eth: float  # ETH units supplied to the pool


def validate_decision(decision: AllocationDecision, p0: float) -> None:
    a, x, y = decision.a_hold, decision.x_lp_lst, decision.y_lp_eth
    if not 0.0 <= a <= 1.0:
        raise ValueError("a_hold must lie in [0, 1]")
    if not 0.0 <= x <= 1.0 / (2.0 * p0) + 1e-15:
        raise ValueError("x_lp_lst must lie in [0, 1/(2 p0)]")
    if abs(y - p0 * x) > 1e-12 * max(1.0, abs(y)):
        raise ValueError("deposit must satisfy y = p0 * x")
    if not p0 * x <= a + 1e-15 or not a <= 1.0 - p0 * x + 1e-15:
        raise ValueError("a_hold must lie in [p0*x, 1 - p0*x]")


@dataclass(frozen=True)
class FeeEvaluation:
    horizon_t: float
    phi_threshold: float  # value of the fee threshold at horizon_t
    cumulative_fee: float  # capped cumulative discounted fee
    capped: bool


def fee_threshold_phi(params: ModelParams, t: float) -> float:
    """Minimal cumulative discounted fee that makes provision worthwhile.

    p0 * [ e^{(g-m-rho) t} (e^{r t} + 1) - 2 e^{(g/2 - sigma^2/8 - m/2 - rho) t} ]
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    g, r, m, rho, sigma = params.g, params.r, params.m, params.rho, params.sigma
    first = math.exp((g - m - rho) * t) * (math.exp(r * t) + 1.0)
    second = 2.0 * math.exp((g / 2.0 - sigma**2 / 8.0 - m / 2.0 - rho) * t)
    return params.p0 * (first - second)


def minimal_fee_rate(params: ModelParams, t: float) -> float:
    """Fee rate phi_t (per LST per unit time) whose discounted integral is the threshold."""
    if t < 0:
        raise ValueError("t must be non-negative")
    g, r, m, rho, sigma = params.g, params.r, params.m, params.rho, params.sigma
    half_exp = math.exp((g / 2.0 - sigma**2 / 8.0 - m / 2.0) * t)
    if params.token_kind is TokenKind.REWARD_BEARING:
        rate = 2.0 * (g - m - rho) * math.exp((g - m) * t) - (
            g - sigma**2 / 4.0 - m - 2.0 * rho
        ) * half_exp
    else:
        rate = (
            (r - m - rho) * math.exp((r - m) * t)
            - (m + rho) * math.exp(-m * t)
            + (sigma**2 / 4.0 + m + 2.0 * rho) * half_exp
        )
    return params.p0 * rate


def cumulative_discounted_fee(params: ModelParams, t: float) -> FeeEvaluation:
    """Cumulative discounted fee at the minimal schedule, capped at 2 p0 K."""
    phi = fee_threshold_phi(params, t)
    cap = 2.0 * params.p0 * params.fee_cap_k
    capped = phi > cap
    return FeeEvaluation(
        horizon_t=t,
        phi_threshold=phi,
        cumulative_fee=min(phi, cap),
        capped=capped,
    )


def allocation_objective(
    decision: AllocationDecision,
    params: ModelParams,
    t: float,
    cumulative_fee: float,
) -> float:
    """Expected discounted value of the portfolio plus accrued fees."""
    validate_decision(decision, params.p0)
    disc = math.exp(-params.rho * t)
    growth = math.exp((params.r + params.g - params.m) * t)
    gap_sq = expected_sqrt_price_gap_sq(params, t)
    return (
        (-disc * gap_sq + cumulative_fee) * decision.x_lp_lst
        - disc * (growth - 1.0) * decision.a_hold
        + disc * growth
    )


def optimal_allocation(
    params: ModelParams, t: float, cumulative_fee: float
) -> AllocationDecision:
    """Vertex optimum of the allocation problem under the inaction tie-break.

    Participation requires the cumulative fee to strictly exceed the
    threshold; at equality the investor does nothing.
    """
    if not check_staking_incentive(params):
        raise ValueError("staking-incentive condition fails; allocation undefined")
    if cumulative_fee > fee_threshold_phi(params, t):
        x = 1.0 / (2.0 * params.p0)
        return AllocationDecision(a_hold=0.5, x_lp_lst=x, y_lp_eth=0.5)
    return AllocationDecision(a_hold=0.0, x_lp_lst=0.0, y_lp_eth=0.0)
