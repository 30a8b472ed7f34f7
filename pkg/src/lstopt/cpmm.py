"""Constant-product pool valuation and single-investor positions.

A CPMM with reserves (X, Y) keeps X * Y = L. Arbitrage pins the internal
marginal rate Y/X to the external realized price, so the pool's post-trade
reserves solve: minimize price*u + v subject to u*v = L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PROVISION_RTOL = 1e-12


@dataclass(frozen=True)
class PoolReserves:
    x_reserve: float  # LST units
    y_reserve: float  # ETH units

    def __post_init__(self):
        if self.x_reserve <= 0 or self.y_reserve <= 0:
            raise ValueError("pool reserves must be strictly positive")

    @property
    def invariant_l(self) -> float:
        return self.x_reserve * self.y_reserve


@dataclass(frozen=True)
class LpPosition:
    lst_deposit: float
    eth_deposit: float
    share_lambda: float


@dataclass(frozen=True)
class RebalancedPool:
    u_star: float  # LST units after rebalancing
    v_star: float  # ETH units after rebalancing
    pool_value: float  # ETH


def rebalance_pool(invariant_l: float, realized_price: float) -> RebalancedPool:
    """Optimal reserves on the curve u*v = L at the given realized price.

    u* = sqrt(L / price), v* = sqrt(price * L), value = 2 sqrt(L * price).
    The marginal rate v*/u* equals the realized price.
    """
    if invariant_l <= 0:
        raise ValueError("invariant_l must be positive")
    if realized_price <= 0:
        raise ValueError("realized_price must be positive")
    u_star = math.sqrt(invariant_l / realized_price)
    v_star = math.sqrt(realized_price * invariant_l)
    return RebalancedPool(u_star, v_star, 2.0 * math.sqrt(invariant_l * realized_price))


def position_value(lst_deposit: float, eth_deposit: float, realized_price: float) -> float:
    """Rebalanced value of a deposit (x, y): 2 sqrt(x * y * price)."""
    if lst_deposit < 0 or eth_deposit < 0:
        raise ValueError("deposits must be non-negative")
    if realized_price <= 0:
        raise ValueError("realized_price must be positive")
    return 2.0 * math.sqrt(lst_deposit * eth_deposit * realized_price)


def provision_for_share(pool: PoolReserves, share_lambda: float) -> LpPosition:
    """Deposit pair proportional to the pool for a share lambda in (0, 1)."""
    if not 0.0 < share_lambda < 1.0:
        raise ValueError("share_lambda must lie in (0, 1)")
    return LpPosition(
        lst_deposit=share_lambda * pool.x_reserve,
        eth_deposit=share_lambda * pool.y_reserve,
        share_lambda=share_lambda,
    )


def check_provision_condition(lst_deposit: float, eth_deposit: float, p0: float) -> bool:
    """Whether a deposit (x, y) leaves the marginal rate at p0, i.e. y/x = p0."""
    if lst_deposit <= 0:
        raise ValueError("lst_deposit must be positive")
    return math.isclose(eth_deposit / lst_deposit, p0, rel_tol=PROVISION_RTOL, abs_tol=0.0)
