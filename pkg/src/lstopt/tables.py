"""Built-in parameter sweeps for the published exit-threshold tables.

All sweeps fix rho = 0.03, sigma = sqrt(0.8), m = 0.08, and K = 2 unless
the parameter itself is swept. Thresholds are reported in scaled units
(L* / p0), so the reward-bearing rows use a nominal p0 just above parity;
c* and V* do not depend on p0.
"""

from __future__ import annotations

import math

from .exit_timing import SearchConfig, optimize_exit
from .market import ModelParams, TokenKind

_SIGMA = math.sqrt(0.8)
_REWARD_BEARING_P0 = 1.05  # nominal; scaled outputs are p0-independent

TABLE_IDS = (1, 2, 3, 4, 5, 6)

FULL_HEADER = (
    "sweep,sweep_value,token_kind,no_fee_c_star,no_fee_l_star_over_p0,"
    "no_fee_v_star,with_fee_c_star,with_fee_l_star_over_p0,with_fee_v_star"
)
FEES_ONLY_HEADER = (
    "sweep,sweep_value,token_kind,with_fee_c_star,with_fee_l_star_over_p0,"
    "with_fee_v_star"
)


def _params(kind: TokenKind, r=0.14, g=0.13, m=0.08, rho=0.03, k=2.0) -> ModelParams:
    if kind is TokenKind.REBASING:
        return ModelParams(
            g=0.0, sigma=_SIGMA, r=r, m=m, rho=rho, p0=1.0, fee_cap_k=k,
            token_kind=kind,
        )
    return ModelParams(
        g=g, sigma=_SIGMA, r=0.0, m=m, rho=rho, p0=_REWARD_BEARING_P0,
        fee_cap_k=k, token_kind=kind,
    )


def _sweep_cases(table_id: int) -> list[tuple[str, float, ModelParams]]:
    reb, rwd = TokenKind.REBASING, TokenKind.REWARD_BEARING
    if table_id == 1:
        return [("r", r, _params(reb, r=r)) for r in (0.12, 0.14, 0.16, 0.18, 0.20)]
    if table_id == 2:
        return [
            ("g", g, _params(rwd, g=g)) for g in (0.120, 0.125, 0.130, 0.135, 0.140)
        ]
    if table_id == 3:
        return [
            ("fee_cap_k", float(k), _params(kind, k=float(k)))
            for kind in (reb, rwd)
            for k in (2, 3, 4, 5, 6)
        ]
    if table_id == 4:
        return [("m", m, _params(reb, m=m)) for m in (0.06, 0.07, 0.08, 0.09, 0.10)]
    if table_id == 5:
        return [
            ("m", m, _params(rwd, m=m)) for m in (0.070, 0.075, 0.080, 0.085, 0.090)
        ]
    if table_id == 6:
        return [
            ("rho", rho, _params(kind, rho=rho))
            for kind in (reb, rwd)
            for rho in (0.010, 0.015, 0.020, 0.025, 0.030)
        ]
    raise ValueError(f"unknown table id {table_id}; expected one of {TABLE_IDS}")


def table_header(table_id: int) -> str:
    return FEES_ONLY_HEADER if table_id == 3 else FULL_HEADER


def table_rows(
    table_id: int, search: SearchConfig = SearchConfig()
) -> list[dict]:
    """Optimizer results for every row of the requested table."""
    rows = []
    for sweep, value, params in _sweep_cases(table_id):
        row = {
            "sweep": sweep,
            "sweep_value": value,
            "token_kind": params.token_kind.value,
        }
        if table_id != 3:
            no_fee = optimize_exit(params, with_fees=False, search=search)
            row.update(
                no_fee_c_star=no_fee.c_star,
                no_fee_l_star_over_p0=no_fee.l_star / params.p0,
                no_fee_v_star=no_fee.v_star,
            )
        with_fee = optimize_exit(params, with_fees=True, search=search)
        row.update(
            with_fee_c_star=with_fee.c_star,
            with_fee_l_star_over_p0=with_fee.l_star / params.p0,
            with_fee_v_star=with_fee.v_star,
        )
        rows.append(row)
    return rows
