import math

import numpy as np
import pytest

from lstopt import ModelParams, TokenKind, check_exit_assumptions, check_staking_incentive

SIGMA_08 = math.sqrt(0.8)


def table1_params(r=0.14, m=0.08, rho=0.03, k=2.0) -> ModelParams:
    return ModelParams(
        g=0.0, sigma=SIGMA_08, r=r, m=m, rho=rho, p0=1.0, fee_cap_k=k,
        token_kind=TokenKind.REBASING,
    )


def table2_params(g=0.13, m=0.08, rho=0.03, k=2.0, p0=1.05) -> ModelParams:
    return ModelParams(
        g=g, sigma=SIGMA_08, r=0.0, m=m, rho=rho, p0=p0, fee_cap_k=k,
        token_kind=TokenKind.REWARD_BEARING,
    )


@pytest.fixture
def rebasing_params() -> ModelParams:
    return table1_params()


@pytest.fixture
def reward_params() -> ModelParams:
    return table2_params()


def draw_assumption_params(rng: np.random.Generator, min_d: float = 0.3) -> ModelParams:
    """Rejection-sample parameters satisfying every standing assumption.

    min_d keeps the boundary slope away from zero so that Monte Carlo
    horizons stay modest.
    """
    while True:
        rebasing = rng.random() < 0.5
        sigma_sq = rng.uniform(0.55, 1.1)
        sigma = math.sqrt(sigma_sq)
        m = rng.uniform(0.03, 0.12)
        rho = rng.uniform(0.01, 0.05)
        if rebasing:
            g, p0 = 0.0, 1.0
            r = rng.uniform(m + rho + 0.005, 0.25)
        else:
            r = 0.0
            g = rng.uniform(m + rho + 0.01, 0.2)
            p0 = math.exp(rng.uniform(0.0, 1.0) * (g - m - rho) * 0.5)
            if p0 <= 1.0:
                continue
        try:
            params = ModelParams(
                g=g, sigma=sigma, r=r, m=m, rho=rho, p0=p0, fee_cap_k=2.0,
                token_kind=TokenKind.REBASING if rebasing else TokenKind.REWARD_BEARING,
            )
        except ValueError:
            continue
        if params.d < min_d:
            continue
        # pathwise payoff terms grow like e^{(g+r-m-rho)T}; requiring
        # d^2 > 5(g+r-m-rho) keeps their second moment finite (with margin)
        # so Monte Carlo standard errors are trustworthy
        if params.d**2 <= 5.0 * (g + r - m - rho):
            continue
        if check_exit_assumptions(params) or not check_staking_incentive(params):
            continue
        return params
