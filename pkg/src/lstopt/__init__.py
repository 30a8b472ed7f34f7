"""Decision analysis for liquid-staking allocation and pool-exit timing."""

from .market import (
    ModelParams,
    TokenKind,
    check_exit_assumptions,
    check_staking_incentive,
    expected_discounted_price,
    expected_sqrt_discounted_price,
)
from .cpmm import (
    LpPosition,
    PoolReserves,
    check_provision_condition,
    position_value,
    provision_for_share,
    rebalance_pool,
)
from .allocation import (
    AllocationDecision,
    FeeEvaluation,
    allocation_objective,
    cumulative_discounted_fee,
    fee_threshold_phi,
    minimal_fee_rate,
    optimal_allocation,
)
from .exit_timing import (
    AssumptionViolationError,
    Direction,
    ExitOptimum,
    PayoffBreakdown,
    Regime,
    SearchConfig,
    StoppingThreshold,
    expected_payoff,
    foc_residual,
    laplace_hitting,
    optimize_exit,
    payoff_terms,
    uncapped_fee_sum,
)
from .mc import (
    default_horizon,
    McEstimate,
    McExitPayoff,
    SimConfig,
    estimate_exit_payoff,
    estimate_hitting_transform,
    first_passage_times,
    simulate_log_price,
)

__all__ = [
    "AllocationDecision",
    "AssumptionViolationError",
    "Direction",
    "ExitOptimum",
    "FeeEvaluation",
    "LpPosition",
    "McEstimate",
    "McExitPayoff",
    "ModelParams",
    "PayoffBreakdown",
    "PoolReserves",
    "Regime",
    "SearchConfig",
    "SimConfig",
    "StoppingThreshold",
    "TokenKind",
    "allocation_objective",
    "check_exit_assumptions",
    "check_provision_condition",
    "check_staking_incentive",
    "cumulative_discounted_fee",
    "estimate_exit_payoff",
    "estimate_hitting_transform",
    "expected_discounted_price",
    "expected_payoff",
    "expected_sqrt_discounted_price",
    "fee_threshold_phi",
    "default_horizon",
    "first_passage_times",
    "foc_residual",
    "laplace_hitting",
    "minimal_fee_rate",
    "optimal_allocation",
    "optimize_exit",
    "payoff_terms",
    "position_value",
    "provision_for_share",
    "rebalance_pool",
    "simulate_log_price",
    "uncapped_fee_sum",
]
