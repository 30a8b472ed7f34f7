"""End-to-end acceptance suite.

Each test covers one acceptance criterion and prints a single
"criterion N: PASS/FAIL" line so the suite doubles as a report when run
with `pytest -v -s tests/test_acceptance.py`.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from lstopt import (
    SimConfig,
    StoppingThreshold,
    estimate_exit_payoff,
    expected_payoff,
    fee_threshold_phi,
    foc_residual,
    minimal_fee_rate,
    optimal_allocation,
    optimize_exit,
    rebalance_pool,
    uncapped_fee_sum,
)
from lstopt.allocation import AllocationDecision, allocation_objective

from conftest import draw_assumption_params, table1_params, table2_params
from test_cpmm import brute_force_pool_value


def report(criterion: int, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"criterion {criterion}: {status}{suffix}")
    assert ok, f"criterion {criterion} failed{suffix}"


TABLE1_NO_FEES = {
    0.12: (-1.291, 0.187),
    0.14: (-1.298, 0.176),
    0.16: (-1.301, 0.163),
    0.18: (-1.292, 0.145),
    0.20: (-1.236, 0.116),
}

TABLE1_WITH_FEES = {
    0.12: (None, 2.000),
    0.14: (None, 2.000),
    0.16: (-10.538, 2.002),
    0.18: (-6.885, 2.014),
    0.20: (-4.640, 2.031),
}

TABLE2_NO_FEES = {
    0.120: (-1.167, 0.221),
    0.125: (-1.163, 0.221),
    0.130: (-1.160, 0.220),
    0.135: (-1.157, 0.220),
    0.140: (-1.154, 0.219),
}

TABLE2_WITH_FEES_V = {
    0.120: 2.000, 0.125: 2.000, 0.130: 2.002, 0.135: 2.009, 0.140: 2.022,
}

NO_FEE_OPTIMA_FOR_FOC = []


def test_criterion_1_table1_no_fees():
    start = time.perf_counter()
    ok = True
    for r, (c_ref, v_ref) in TABLE1_NO_FEES.items():
        optimum = optimize_exit(table1_params(r=r), with_fees=False)
        NO_FEE_OPTIMA_FOR_FOC.append((table1_params(r=r), optimum.c_star))
        ok &= abs(optimum.c_star - c_ref) <= 0.005
        ok &= abs(optimum.v_star - v_ref) <= 0.002
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1.0
    report(1, ok, f"runtime {elapsed:.2f}s")


def test_criterion_2_table1_with_fees():
    ok = True
    for r, (c_ref, v_ref) in TABLE1_WITH_FEES.items():
        optimum = optimize_exit(table1_params(r=r), with_fees=True)
        ok &= abs(optimum.v_star - v_ref) <= 0.005
        if c_ref is None:
            ok &= optimum.c_star <= -15.0  # plateau rows
        else:
            ok &= abs(optimum.c_star - c_ref) <= 0.02 * abs(c_ref)
    report(2, ok)


def test_criterion_3_table2():
    ok = True
    for g, (c_ref, v_ref) in TABLE2_NO_FEES.items():
        optimum = optimize_exit(table2_params(g=g), with_fees=False)
        NO_FEE_OPTIMA_FOR_FOC.append((table2_params(g=g), optimum.c_star))
        ok &= abs(optimum.c_star - c_ref) <= 0.005
        ok &= abs(optimum.v_star - v_ref) <= 0.002
    for g, v_ref in TABLE2_WITH_FEES_V.items():
        optimum = optimize_exit(table2_params(g=g), with_fees=True)
        ok &= abs(optimum.v_star - v_ref) <= 0.005
    report(3, ok)


def test_criterion_4_cap_law():
    ok = True
    for k in (2.0, 3.0, 4.0, 5.0, 6.0):
        for params in (table1_params(r=0.14, k=k), table2_params(g=0.13, k=k)):
            optimum = optimize_exit(params, with_fees=True)
            ok &= abs(optimum.v_star - k) <= 0.005
    report(4, ok)


def test_criterion_5_appendix_spot_checks():
    ok = True
    opt_m = optimize_exit(table1_params(m=0.06), with_fees=False)
    NO_FEE_OPTIMA_FOR_FOC.append((table1_params(m=0.06), opt_m.c_star))
    ok &= abs(opt_m.c_star - (-1.340)) <= 0.005
    ok &= abs(opt_m.v_star - 0.169) <= 0.002
    opt_rho = optimize_exit(table1_params(rho=0.010), with_fees=False)
    NO_FEE_OPTIMA_FOR_FOC.append((table1_params(rho=0.010), opt_rho.c_star))
    ok &= abs(opt_rho.c_star - (-1.363)) <= 0.005
    ok &= abs(opt_rho.v_star - 0.180) <= 0.002
    opt_fee = optimize_exit(table2_params(g=0.13), with_fees=True)
    ok &= abs(opt_fee.v_star - 2.002) <= 0.005
    report(5, ok)


def test_criterion_6_monte_carlo_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(60)
    c_cycle = (-2.0, -1.0, -0.3, 0.5)
    passed = total = 0
    for i in range(10):
        params = draw_assumption_params(rng, min_d=0.3)
        c = c_cycle[i % len(c_cycle)]
        threshold = StoppingThreshold.from_c(c, params)
        horizon = 120.0 if c < 0 else 60.0
        config = SimConfig(n_paths=200_000, dt=0.02, horizon=horizon, seed=600 + i)
        mc = estimate_exit_payoff(threshold, params, with_fees=True, config=config)
        exact = expected_payoff(threshold, params, with_fees=True)
        comparisons = [
            (mc.fee_uncapped, uncapped_fee_sum(threshold, params)),
            (mc.impermanent_loss, exact.impermanent_loss),
            (mc.opportunity, exact.opportunity),
            (mc.no_fee_total, exact.no_fee_total),
        ]
        for estimate, theory in comparisons:
            total += 1
            if abs(estimate.mean - theory) <= 3.0 * estimate.std_error:
                passed += 1
    elapsed = time.perf_counter() - start
    ok = passed >= 36 and total == 40 and elapsed < 60.0
    report(6, ok, f"{passed}/40 within 3 SE, runtime {elapsed:.1f}s")


def test_criterion_7_sign_laws():
    rng = np.random.default_rng(70)
    violations = 0
    for _ in range(50):
        params = draw_assumption_params(rng)
        c_values = np.concatenate(
            [-np.geomspace(0.01, 5.0, 10), np.geomspace(0.01, 5.0, 10)]
        )
        for c in c_values:
            threshold = StoppingThreshold.from_c(float(c), params)
            breakdown = expected_payoff(threshold, params, with_fees=False)
            if not breakdown.impermanent_loss < 0:
                violations += 1
            if not ((breakdown.opportunity > 0) == (c < 0)):
                violations += 1
            if not ((breakdown.no_fee_total > 0) == (c < 0)):
                violations += 1
            if not uncapped_fee_sum(threshold, params) > 0:
                violations += 1
            if c < 0 and not (
                breakdown.opportunity > -breakdown.impermanent_loss
            ):
                violations += 1
    report(7, violations == 0, f"{violations} violations")


def test_criterion_8_fee_schedule_identity():
    ok = True
    for params in (table1_params(), table2_params()):
        ok &= fee_threshold_phi(params, 0.0) == 0.0
        for t in (0.1, 0.5, 1.0, 2.0, 5.0):
            integral, _ = quad(
                lambda s: minimal_fee_rate(params, s) * math.exp(-params.rho * s),
                0.0, t, epsabs=1e-12, limit=200,
            )
            ok &= abs(integral - fee_threshold_phi(params, t)) <= 1e-8
    report(8, ok)


def test_criterion_9_cpmm_properties():
    rng = np.random.default_rng(90)
    failures = 0
    for _ in range(1000):
        invariant_l = float(rng.uniform(0.1, 50.0))
        price = float(rng.uniform(0.05, 20.0))
        scale = float(rng.uniform(0.1, 10.0))
        pool = rebalance_pool(invariant_l, price)
        scaled = rebalance_pool(scale**2 * invariant_l, price)
        # homogeneity: reserves and value scale linearly in sqrt(L)
        if abs(scaled.pool_value - scale * pool.pool_value) > 1e-12 * max(
            1.0, scaled.pool_value
        ):
            failures += 1
        # product conservation
        if abs(pool.u_star * pool.v_star - invariant_l) > 1e-12 * max(
            1.0, invariant_l
        ):
            failures += 1
        # marginal-rate alignment: v*/u* equals the realized price
        if abs(pool.v_star / pool.u_star - price) > 1e-12 * max(1.0, price):
            failures += 1
        # brute-force grid never beats the closed-form minimum
        grid_min = brute_force_pool_value(invariant_l, price, n_grid=20_000)
        if not pool.pool_value * (1.0 - 1e-6) <= grid_min <= pool.pool_value * (
            1.0 + 1e-4
        ):
            failures += 1
    report(9, failures == 0, f"{failures} failures")


def test_criterion_10_foc_at_optima():
    assert NO_FEE_OPTIMA_FOR_FOC, "criteria 1/3/5 populate the optima list"
    ok = True
    for params, c_star in NO_FEE_OPTIMA_FOR_FOC:
        residual, concave = foc_residual(c_star, params)
        ok &= abs(residual) < 1e-6 and concave
    report(10, ok, f"{len(NO_FEE_OPTIMA_FOR_FOC)} optima checked")


def test_criterion_11_allocation_vertices():
    rng = np.random.default_rng(110)
    params = table1_params()
    p0 = params.p0
    failures = 0
    for _ in range(1000):
        t = float(rng.uniform(0.01, 5.0))
        threshold = fee_threshold_phi(params, t)
        fee = float(rng.choice([rng.uniform(0.0, 2.0), threshold]))
        decision = optimal_allocation(params, t, fee)
        value = allocation_objective(decision, params, t, fee)
        for a, x in ((0.0, 0.0), (1.0, 0.0), (0.5, 0.5 / p0)):
            candidate = allocation_objective(
                AllocationDecision(a, x, p0 * x), params, t, fee
            )
            if candidate > value + 1e-12:
                failures += 1
        if fee == threshold and decision != AllocationDecision(0.0, 0.0, 0.0):
            failures += 1
    report(11, failures == 0, f"{failures} failures")
