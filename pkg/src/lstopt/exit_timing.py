"""Closed-form exit payoffs under fixed price thresholds and their optimizer.

The investor exits the pool the first time the scaled log-price Brownian
motion B_t reaches c + d t (equivalently, the price reaches L = p0 e^{sigma c}).
Every expectation reduces to Laplace transforms of that hitting time, so the
payoff, its fee/impermanent-loss/opportunity decomposition, the first-order
condition, and the threshold optimizer are all explicit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .market import ModelParams, check_exit_assumptions


class AssumptionViolationError(ValueError):
    """An exit-timing well-posedness condition fails for these parameters."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"exit assumptions violated: {', '.join(self.violations)}")


class Direction(enum.Enum):
    UP = "up"  # c > 0: stop when the price rises to L > p0
    DOWN = "down"  # c < 0: stop when the price falls to L < p0


@dataclass(frozen=True)
class StoppingThreshold:
    c: float  # scaled log-threshold, c = ln(L/p0) / sigma
    d: float  # boundary slope sigma/2 - g/sigma
    l_over_p0: float  # price threshold in units of p0, e^{sigma c}
    direction: Direction

    @classmethod
    def from_c(cls, c: float, params: ModelParams) -> "StoppingThreshold":
        if c == 0.0:
            raise ValueError("c must be nonzero")
        return cls(
            c=c,
            d=params.d,
            l_over_p0=math.exp(params.sigma * c),
            direction=Direction.UP if c > 0 else Direction.DOWN,
        )


class Regime(enum.Enum):
    NO_FEES = "no_fees"
    WITH_FEES = "with_fees"


@dataclass(frozen=True)
class PayoffBreakdown:
    fee: float  # expected capped fee, 0 in the no-fee regime
    impermanent_loss: float  # always negative
    opportunity: float  # positive iff c < 0
    no_fee_total: float  # impermanent_loss + opportunity
    with_fee_total: float  # fee + no_fee_total


@dataclass(frozen=True)
class ExitOptimum:
    c_star: float
    l_star: float  # p0 * e^{sigma c_star}
    v_star: float
    regime: Regime
    foc_residual: float | None  # populated for the no-fee regime only
    boundary: bool = False  # optimum pinned to the search boundary


def laplace_hitting(c: float, d: float, lam: float) -> float:
    """E[e^{-lam * T}] for the first passage of B_t to c + d t (0 if never hit).

    The branch of the square root flips with the sign of c; for c < 0 and
    d > 0 the boundary is hit almost surely, so lam = 0 gives 1.
    """
    if c == 0.0:
        raise ValueError("c must be nonzero")
    radicand = d * d + 2.0 * lam
    if radicand < 0.0:
        raise ValueError("transform undefined: d^2 + 2*lam < 0")
    root = math.sqrt(radicand)
    if c > 0:
        return math.exp(-c * (d + root))
    return math.exp(-c * (d - root))


def _sqrt_or_raise(radicand: float, condition_id: str) -> float:
    if radicand < 0.0:
        raise AssumptionViolationError([condition_id])
    return math.sqrt(radicand)


def _require_assumptions(params: ModelParams) -> None:
    violations = check_exit_assumptions(params)
    if violations:
        raise AssumptionViolationError(violations)


def payoff_terms(threshold: StoppingThreshold, params: ModelParams) -> tuple:
    """The six Laplace-transform terms of the exit payoff, signed.

    Terms 1-3 sum to the uncapped expected fee; terms 4-6 sum to the
    no-fee payoff.
    """
    _require_assumptions(params)
    g, r, m, rho, sigma = params.g, params.r, params.m, params.rho, params.sigma
    c, d = threshold.c, threshold.d
    s = 1.0 if c > 0 else -1.0

    r1 = _sqrt_or_raise(d * d - 2.0 * (g + r - m - rho), "dsq_gt_two_reward_gap")
    r2 = _sqrt_or_raise(d * d - 2.0 * (g - m - rho), "dsq_gt_two_reward_gap")
    r3 = _sqrt_or_raise(d * d - (g - sigma**2 / 4.0 - m - 2.0 * rho), "dsq_gt_fee_gap")
    r4 = math.sqrt(d * d + m + 2.0 * rho)
    r5 = _sqrt_or_raise(d * d - 2.0 * (r - rho - m), "dsq_gt_two_reward_gap")
    r6 = math.sqrt(d * d + 2.0 * (rho + m))

    t1 = 0.5 * math.exp(-c * (d + s * r1))
    t2 = 0.5 * math.exp(-c * (d + s * r2))
    t3 = -math.exp(-c * (d + s * r3))
    t4 = math.exp(-c * (-sigma / 2.0 + d + s * r4))
    t5 = -0.5 * math.exp(-c * (-sigma + d + s * r5))
    t6 = -0.5 * math.exp(-c * (-sigma + d + s * r6))
    return (t1, t2, t3, t4, t5, t6)


def uncapped_fee_sum(threshold: StoppingThreshold, params: ModelParams) -> float:
    t1, t2, t3, _, _, _ = payoff_terms(threshold, params)
    return t1 + t2 + t3


def expected_payoff(
    threshold: StoppingThreshold, params: ModelParams, with_fees: bool
) -> PayoffBreakdown:
    """Expected exit payoff split into fee, impermanent loss, and opportunity."""
    _require_assumptions(params)
    g, r, m, rho, sigma = params.g, params.r, params.m, params.rho, params.sigma
    c, d = threshold.c, threshold.d
    s = 1.0 if c > 0 else -1.0

    root_il = math.sqrt(d * d + 2.0 * m + 2.0 * rho)
    root_rho = math.sqrt(d * d + 2.0 * rho)
    root_mid = math.sqrt(d * d + m + 2.0 * rho)
    root_st = _sqrt_or_raise(
        d * d - 2.0 * r + 2.0 * m + 2.0 * rho, "dsq_gt_two_reward_gap"
    )

    il = 0.5 * (
        -math.exp(sigma * c - c * (d + s * root_il))
        - math.exp(-c * (d + s * root_rho))
        + 2.0 * math.exp(sigma * c / 2.0 - c * (d + s * root_mid))
    )
    st = 0.5 * (
        -math.exp(sigma * c - c * (d + s * root_st))
        + math.exp(-c * (d + s * root_rho))
    )

    fee = 0.0
    if with_fees:
        fee = min(uncapped_fee_sum(threshold, params), params.fee_cap_k)

    no_fee_total = il + st
    return PayoffBreakdown(
        fee=fee,
        impermanent_loss=il,
        opportunity=st,
        no_fee_total=no_fee_total,
        with_fee_total=fee + no_fee_total,
    )


def _foc_coefficients(params: ModelParams) -> tuple:
    d, sigma, m, rho, r = params.d, params.sigma, params.m, params.rho, params.r
    d1 = -sigma / 2.0 + d - math.sqrt(d * d + m + 2.0 * rho)
    d2 = -sigma + d - math.sqrt(d * d - 2.0 * (r - rho - m))
    d3 = -sigma + d - math.sqrt(d * d + 2.0 * (rho + m))
    return d1, d2, d3


def foc_residual(c: float, params: ModelParams) -> tuple[float, bool]:
    """First-order-condition residual of the no-fee payoff at c < 0.

    Returns (residual, second_order_ok) where second_order_ok reports
    local concavity at c.
    """
    if c >= 0:
        raise ValueError("foc_residual is defined for c < 0 only")
    _require_assumptions(params)
    d1, d2, d3 = _foc_coefficients(params)
    e1, e2, e3 = math.exp(-c * d1), math.exp(-c * d2), math.exp(-c * d3)
    residual = -d1 * e1 + 0.5 * d2 * e2 + 0.5 * d3 * e3
    concave = d1 * d1 * e1 - 0.5 * d2 * d2 * e2 - 0.5 * d3 * d3 * e3 < 0.0
    return residual, concave


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, a: float, b: float, tol: float) -> float:
    """Golden-section maximization on [a, b]; returns the abscissa."""
    lo, hi = a, b
    c1 = hi - _INV_PHI * (hi - lo)
    c2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(c1), f(c2)
    while hi - lo > tol:
        if f1 < f2:
            lo, c1, f1 = c1, c2, f2
            c2 = lo + _INV_PHI * (hi - lo)
            f2 = f(c2)
        else:
            hi, c2, f2 = c2, c1, f1
            c1 = hi - _INV_PHI * (hi - lo)
            f1 = f(c1)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SearchConfig:
    c_min: float = -200.0
    grid_points: int = 4000
    refine_tol: float = 1e-7


def optimize_exit(
    params: ModelParams,
    with_fees: bool,
    search: SearchConfig = SearchConfig(),
) -> ExitOptimum:
    """Maximize the expected exit payoff over thresholds c in [c_min, 0).

    A log-spaced coarse grid in |c| brackets the peak (resolving both the
    near-zero maximum of the no-fee payoff and the deep fee-cap plateau),
    followed by golden-section refinement. Without fees the up-direction
    c > 0 is also swept and verified to be non-positive.
    """
    _require_assumptions(params)
    if search.c_min >= 0:
        raise ValueError("c_min must be negative")

    def total(c: float) -> float:
        return expected_payoff(
            StoppingThreshold.from_c(c, params), params, with_fees
        ).with_fee_total if with_fees else expected_payoff(
            StoppingThreshold.from_c(c, params), params, False
        ).no_fee_total

    n = search.grid_points
    lo_abs, hi_abs = 1e-4, abs(search.c_min)
    ratio = (hi_abs / lo_abs) ** (1.0 / (n - 1))
    grid = [-lo_abs * ratio**i for i in range(n)]
    values = [total(c) for c in grid]
    best = max(range(n), key=values.__getitem__)

    boundary = best in (0, n - 1)
    if boundary:
        c_star = grid[best]
    else:
        # grid is descending in c toward c_min; neighbours bracket the peak
        a, b = grid[best + 1], grid[best - 1]
        c_star = _golden_max(total, a, b, search.refine_tol)

    v_star = total(c_star)

    if not with_fees:
        up_sup = max(total(lo_abs * ratio**i) for i in range(n))
        if up_sup > 0.0:
            raise RuntimeError(
                "no-fee payoff positive for some c > 0; model assumptions "
                "are inconsistent with the sign law"
            )
        residual, _ = foc_residual(c_star, params)
    else:
        residual = None

    return ExitOptimum(
        c_star=c_star,
        l_star=params.p0 * math.exp(params.sigma * c_star),
        v_star=v_star,
        regime=Regime.WITH_FEES if with_fees else Regime.NO_FEES,
        foc_residual=residual,
        boundary=boundary,
    )
