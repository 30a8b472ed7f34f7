"""Command-line surface for validation, allocation, exit optimization, and MC checks.

Exit codes: 0 success, 2 configuration error, 3 model-assumption violation,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import allocation, cpmm, mc, tables
from .exit_timing import (
    AssumptionViolationError,
    SearchConfig,
    StoppingThreshold,
    expected_payoff,
    optimize_exit,
)
from .market import (
    ModelParams,
    check_exit_assumptions,
    check_staking_incentive,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3
EXIT_NUMERICAL = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _write(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_record(record: dict, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        _write(json.dumps(record, indent=2) + "\n", out_path)
    else:
        keys = list(record)
        lines = [",".join(keys), ",".join(_fmt(record[k]) for k in keys)]
        _write("\n".join(lines) + "\n", out_path)


def _emit_rows(header: str, rows: list[dict], fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        _write(json.dumps(rows, indent=2) + "\n", out_path)
    else:
        keys = header.split(",")
        lines = [header]
        lines += [",".join(_fmt(row[k]) for k in keys) for row in rows]
        _write("\n".join(lines) + "\n", out_path)


def _load_params(path: str) -> ModelParams:
    try:
        return ModelParams.from_json(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"invalid parameter file {path}: {exc}", EXIT_CONFIG) from exc


def _require_exit_assumptions(params: ModelParams) -> None:
    violations = check_exit_assumptions(params)
    if violations:
        raise CliError(
            f"model assumptions violated: {', '.join(violations)}", EXIT_ASSUMPTION
        )


def _cmd_validate(params: ModelParams, args) -> None:
    record = {
        "staking_incentive": check_staking_incentive(params),
        "staking_incentive_boundary": params.p0 == 1.0,
        "exit_assumption_violations": check_exit_assumptions(params),
        "derived": {"d": params.d},
    }
    _write(json.dumps(record, indent=2) + "\n", args.out)


def _cmd_allocate(params: ModelParams, args) -> None:
    phi = allocation.fee_threshold_phi(params, args.t)
    if args.fee_override is not None:
        fee = args.fee_override
        capped = False
    else:
        evaluation = allocation.cumulative_discounted_fee(params, args.t)
        fee = evaluation.cumulative_fee
        capped = evaluation.capped
    try:
        decision = allocation.optimal_allocation(params, args.t, fee)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ASSUMPTION) from exc
    record = {
        "t": args.t,
        "a_hold": decision.a_hold,
        "x_lp_lst": decision.x_lp_lst,
        "y_lp_eth": decision.y_lp_eth,
        "phi_threshold": phi,
        "cumulative_fee": fee,
        "fee_capped": capped,
        "indifference_gap": fee - phi,
    }
    _emit_record(record, args.format, args.out)


def _cmd_pool(params: ModelParams, args) -> None:
    try:
        rebalanced = cpmm.rebalance_pool(args.invariant_l, args.price)
        record = {
            "invariant_l": args.invariant_l,
            "realized_price": args.price,
            "u_star": rebalanced.u_star,
            "v_star": rebalanced.v_star,
            "pool_value": rebalanced.pool_value,
        }
        if args.x is not None and args.y is not None:
            record["position_value"] = cpmm.position_value(args.x, args.y, args.price)
            record["provision_condition"] = cpmm.check_provision_condition(
                args.x, args.y, params.p0
            )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    _emit_record(record, args.format, args.out)


def _cmd_fee_curve(params: ModelParams, args) -> None:
    if args.t_max <= 0 or args.steps < 1:
        raise CliError("--t-max must be positive and --steps at least 1", EXIT_CONFIG)
    rows = []
    for i in range(args.steps + 1):
        t = args.t_max * i / args.steps
        evaluation = allocation.cumulative_discounted_fee(params, t)
        rows.append(
            {
                "t": t,
                "phi_rate": allocation.minimal_fee_rate(params, t),
                "phi_threshold": evaluation.phi_threshold,
                "capped": evaluation.capped,
            }
        )
    _emit_rows("t,phi_rate,phi_threshold,capped", rows, args.format, args.out)


def _cmd_exit(params: ModelParams, args) -> None:
    _require_exit_assumptions(params)
    search = SearchConfig(c_min=args.c_min, grid_points=args.grid, refine_tol=args.tol)
    try:
        optimum = optimize_exit(params, with_fees=args.fees, search=search)
    except RuntimeError as exc:
        raise CliError(str(exc), EXIT_NUMERICAL) from exc
    record = {
        "c_star": optimum.c_star,
        "l_star": optimum.l_star,
        "v_star": optimum.v_star,
        "regime": optimum.regime.value,
        "foc_residual": optimum.foc_residual,
        "boundary": optimum.boundary,
    }
    _emit_record(record, args.format, args.out)


def _decompose_grid(c_from: float, c_to: float, steps: int, split: bool) -> list[float]:
    lo, hi = min(c_from, c_to), max(c_from, c_to)
    if lo < 0.0 <= hi or lo <= 0.0 < hi:
        if not split:
            raise CliError(
                "sweep range crosses c = 0; pass --split-at-zero to evaluate "
                "both sides",
                EXIT_CONFIG,
            )
    grid = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
    return [c for c in grid if c != 0.0]


def _cmd_decompose(params: ModelParams, args) -> None:
    _require_exit_assumptions(params)
    if args.steps < 1:
        raise CliError("--steps must be at least 1", EXIT_CONFIG)
    grid = _decompose_grid(args.c_from, args.c_to, args.steps, args.split_at_zero)
    rows = []
    for c in grid:
        threshold = StoppingThreshold.from_c(c, params)
        payoff = expected_payoff(threshold, params, with_fees=args.fees)
        rows.append(
            {
                "c": c,
                "l_over_p0": threshold.l_over_p0,
                "fee": payoff.fee,
                "impermanent_loss": payoff.impermanent_loss,
                "opportunity": payoff.opportunity,
                "no_fee_total": payoff.no_fee_total,
                "with_fee_total": payoff.with_fee_total,
            }
        )
    header = "c,l_over_p0,fee,impermanent_loss,opportunity,no_fee_total,with_fee_total"
    _emit_rows(header, rows, args.format, args.out)


def _cmd_table(params: ModelParams, args) -> None:
    if args.table not in tables.TABLE_IDS:
        raise CliError(
            f"unknown table id {args.table}; expected one of {tables.TABLE_IDS}",
            EXIT_CONFIG,
        )
    rows = tables.table_rows(args.table)
    _emit_rows(tables.table_header(args.table), rows, args.format, args.out)


def _estimate_dict(estimate: mc.McEstimate, closed_form: float) -> dict:
    z = (
        (estimate.mean - closed_form) / estimate.std_error
        if estimate.std_error > 0
        else math.inf
    )
    return {
        "estimate": estimate.mean,
        "std_error": estimate.std_error,
        "n_hit": estimate.n_hit,
        "truncation_mass": estimate.truncation_mass,
        "closed_form": closed_form,
        "z_score": z,
    }


def _cmd_simulate(params: ModelParams, args) -> None:
    _require_exit_assumptions(params)
    if args.c == 0.0:
        raise CliError("--c must be nonzero", EXIT_CONFIG)
    threshold = StoppingThreshold.from_c(args.c, params)
    config = mc.SimConfig(
        n_paths=args.paths, dt=args.dt, horizon=args.horizon, seed=args.seed
    )
    estimated = mc.estimate_exit_payoff(threshold, params, args.fees, config)
    exact = expected_payoff(threshold, params, with_fees=args.fees)
    from .exit_timing import uncapped_fee_sum

    record = {
        "c": args.c,
        "fees": args.fees,
        "fee_uncapped": _estimate_dict(
            estimated.fee_uncapped, uncapped_fee_sum(threshold, params)
        ),
        "impermanent_loss": _estimate_dict(
            estimated.impermanent_loss, exact.impermanent_loss
        ),
        "opportunity": _estimate_dict(estimated.opportunity, exact.opportunity),
        "no_fee_total": _estimate_dict(estimated.no_fee_total, exact.no_fee_total),
        "with_fee_total": _estimate_dict(
            estimated.with_fee_total, exact.with_fee_total
        ),
        "fee_capped": estimated.capped,
    }
    _write(json.dumps(record, indent=2) + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lstopt",
        description="Liquid-staking allocation and pool-exit decision analysis.",
    )
    parser.add_argument("--params", required=True, help="path to ModelParams JSON")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="report assumption checks")

    p = sub.add_parser("allocate", help="optimal time-0 allocation")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--fee-override", type=float, default=None)

    p = sub.add_parser("pool", help="ad-hoc CPMM evaluation")
    p.add_argument("--invariant-l", type=float, required=True)
    p.add_argument("--price", type=float, required=True)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)

    p = sub.add_parser("fee-curve", help="minimal fee schedule over time")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)

    p = sub.add_parser("exit", help="optimal exit threshold")
    fee_group = p.add_mutually_exclusive_group(required=True)
    fee_group.add_argument("--fees", action="store_true", dest="fees")
    fee_group.add_argument("--no-fees", action="store_false", dest="fees")
    p.add_argument("--c-min", type=float, default=-200.0)
    p.add_argument("--grid", type=int, default=4000)
    p.add_argument("--tol", type=float, default=1e-7)

    p = sub.add_parser("decompose", help="payoff components over a c sweep")
    p.add_argument("--c-from", type=float, required=True)
    p.add_argument("--c-to", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--fees", action="store_true")
    p.add_argument("--split-at-zero", action="store_true")

    p = sub.add_parser("table", help="reproduce a built-in parametric table")
    p.add_argument("--table", type=int, required=True)

    p = sub.add_parser("simulate", help="Monte Carlo cross-check of the exit payoff")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--fees", action="store_true")

    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "allocate": _cmd_allocate,
    "pool": _cmd_pool,
    "fee-curve": _cmd_fee_curve,
    "exit": _cmd_exit,
    "decompose": _cmd_decompose,
    "table": _cmd_table,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _load_params(args.params)
        _COMMANDS[args.command](params, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except AssumptionViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
