"""Command-line front end.

Subcommands::

    optimize   closed-form and numeric optimal monetization for a parameter file
    politics   median-voter analysis of a population file
    replay     run a scenario (or the built-in Venice timeline) to a CSV series
    ledger     transaction log / balance snapshot of a scenario run
    fit-agio   calibrate the premium curve to an observations CSV

Exit codes: 0 success, 2 parse or usage error, 3 domain error or
infeasibility, 4 data validation failure. Reports are deterministic given
the inputs and ``--seed``; ``--output json`` carries the same values as
the default CSV rendering. Set ``GIRO_SIM_NO_COLOR`` to disable ANSI
styling on terminals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import market, policy, population, scenario
from .errors import (
    DegenerateFit,
    DomainError,
    EmptyPopulation,
    Infeasible,
    LedgerError,
    NoCondorcetWinner,
    NoFeasiblePolicy,
    ParseError,
    ValidationError,
)
from .ledger import balances_snapshot_json, transaction_log_csv

#: Default seed for anything stochastic, chosen for the year of the plague.
DEFAULT_SEED = 1630

#: Fixed beta used for the comparative-statics sweep printed by ``optimize``
#: (must stay budget-feasible across the whole sweep grid).
SWEEP_BETA = 0.25
SWEEP_ETAS = (0.35, 0.5, 0.65)
SWEEP_RATES = (0.03, 0.07, 0.14)
SWEEP_PHIS = (0.10, 0.14, 0.28)


def _color_enabled(stream) -> bool:
    return (
        hasattr(stream, "isatty")
        and stream.isatty()
        and not os.environ.get("GIRO_SIM_NO_COLOR")
    )


def _passfail(ok: bool, stream) -> str:
    word = "PASS" if ok else "FAIL"
    if _color_enabled(stream):
        code = "32" if ok else "31"
        return f"\x1b[{code}m{word}\x1b[0m"
    return word


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


# --- optimize -----------------------------------------------------------------


def cmd_optimize(args) -> int:
    params = policy.load_params(args.params)
    closed = policy.optimal_delta_closed_form(params)
    best = policy.optimal_policy_numeric(params)
    breakdown = policy.welfare(best, params)
    resource = policy.central_bank_resource(best.delta, best.beta, params)
    sweep = policy.comparative_statics_sweep(
        SWEEP_BETA, SWEEP_ETAS, SWEEP_RATES, SWEEP_PHIS, params
    )
    data = {
        "closed_form_delta": closed.value,
        "closed_form_delta_unclamped": closed.unclamped,
        "numeric_beta": best.beta,
        "numeric_delta": best.delta,
        "numeric_tau": best.tau,
        "welfare_u": breakdown.u,
        "welfare_f": breakdown.f,
        "welfare_m": breakdown.m,
        "welfare_v": breakdown.v,
        "issue_resource": resource,
        "sweep_beta": SWEEP_BETA,
        "seed": args.seed,
    }
    if args.output == "json":
        data["sweep"] = [
            {name: getattr(row, name) for name in policy.SWEEP_CSV_HEADER}
            for row in sweep
        ]
        _emit(json.dumps(data, indent=2, sort_keys=True), args.out)
    else:
        lines = [f"{key},{_fmt(value)}" for key, value in data.items()]
        lines.append("")
        lines.append(policy.sweep_csv(sweep).rstrip("\n"))
        _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- politics -----------------------------------------------------------------


def cmd_politics(args) -> int:
    params = policy.load_params(args.params)
    pop = population.load_population(args.population)
    beta = args.beta
    median = population.median_inhabitant(pop)
    delta_a = policy.actual_delta(median, beta, params)
    closed = policy.optimal_delta_closed_form(params)

    members = []
    counts: dict[str, int] = {}
    for member in pop.members:
        cls = population.classify(member, beta, params)
        preferred = policy.inhabitant_optimal_delta(member, beta, params)
        members.append(
            {
                "theta_j": member.theta_j,
                "b_j": member.b_j,
                "class": cls.value,
                "ambiguous": cls.ambiguous,
                "delta_j": preferred.value,
                "delta_j_unclamped": preferred.unclamped,
                "distortion": policy.political_distortion(member, beta, params),
            }
        )
        counts[cls.value] = counts.get(cls.value, 0) + 1

    condorcet: dict[str, object] = {}
    try:
        winner = population.condorcet_delta(pop, beta, params, args.grid_step)
        median_pref = population.preferred_grid_delta(
            median, beta, params, args.grid_step
        )
        condorcet = {
            "winner": winner,
            "median_preferred": median_pref,
            "matches_median": winner == median_pref,
        }
    except Infeasible as exc:
        condorcet = {"unavailable": str(exc)}
    except NoCondorcetWinner as exc:
        condorcet = {"no_winner": str(exc)}

    data = {
        "beta": beta,
        "median_theta_j": median.theta_j,
        "median_b_j": median.b_j,
        "social_delta": closed.value,
        "actual_delta": delta_a,
        "subsidized_majority": population.subsidized_majority(pop),
        "class_counts": counts,
        "condorcet": condorcet,
        "seed": args.seed,
    }
    if args.output == "json":
        data["members"] = members
        _emit(json.dumps(data, indent=2, sort_keys=True), args.out)
        return 0
    lines = []
    for key in (
        "beta",
        "median_theta_j",
        "median_b_j",
        "social_delta",
        "actual_delta",
        "subsidized_majority",
    ):
        lines.append(f"{key},{_fmt(data[key])}")
    for name, count in sorted(counts.items()):
        lines.append(f"count[{name}],{count}")
    for key, value in condorcet.items():
        lines.append(f"condorcet_{key},{_fmt(value)}")
    lines.append(f"seed,{args.seed}")
    lines.append("")
    lines.append("theta_j,b_j,class,ambiguous,delta_j,delta_j_unclamped,distortion")
    for row in members:
        lines.append(
            ",".join(
                [
                    _fmt(row["theta_j"]),
                    _fmt(row["b_j"]),
                    f"\"{row['class']}\"",
                    str(row["ambiguous"]),
                    _fmt(row["delta_j"]),
                    _fmt(row["delta_j_unclamped"]),
                    _fmt(row["distortion"]),
                ]
            )
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- replay and ledger ----------------------------------------------------------


def _load_scenario(args) -> tuple[scenario.Scenario, tuple[scenario.Checkpoint, ...]]:
    if args.builtin:
        if args.builtin != "venice":
            raise ValidationError(f"unknown built-in scenario {args.builtin!r}")
        return scenario.venice_1629_builtin(), scenario.VENICE_CHECKPOINTS
    return scenario.load(args.scenario), ()


def _checkpoint_lines(report, stream) -> list[str]:
    lines = ["checkpoint,date,expected_MB,actual_MB,status"]
    for item in report:
        lines.append(
            ",".join(
                [
                    f'"{item.checkpoint.label}"',
                    item.checkpoint.date.isoformat(),
                    str(item.checkpoint.mb),
                    "" if item.actual_mb is None else str(item.actual_mb),
                    _passfail(item.passed, stream),
                ]
            )
        )
    return lines


def _schedule_lines(result) -> list[str]:
    lines = ["funded_debt_date,principal,rate,note"]
    for debt in result.funded_debt_schedule:
        rate = "" if debt.rate is None else repr(debt.rate)
        lines.append(
            f'{debt.date.isoformat()},{debt.principal},{rate},"{debt.note}"'
        )
    lines.append(
        f"annual_debt_service,{_fmt(scenario.annual_debt_service(result.funded_debt_schedule))}"
    )
    return lines


def cmd_replay(args) -> int:
    scn, checkpoints = _load_scenario(args)
    result = scenario.run(scn)
    report = scenario.checkpoint_report(result, checkpoints)
    if args.output == "json":
        data = {
            "series": [
                {
                    "date": snap.date.isoformat(),
                    "MB": snap.mb,
                    "BW": snap.bw,
                    "TW": snap.tw,
                    "TB_fiscal": snap.tb_fiscal,
                    "consolidated_net_worth": snap.consolidated_net_worth,
                    "agio": snap.agio,
                }
                for snap in result.series
            ],
            "funded_debt": [
                {
                    "date": debt.date.isoformat(),
                    "principal": debt.principal,
                    "rate": debt.rate,
                    "note": debt.note,
                }
                for debt in result.funded_debt_schedule
            ],
            "annual_debt_service": scenario.annual_debt_service(
                result.funded_debt_schedule
            ),
            "checkpoints": [
                {
                    "label": item.checkpoint.label,
                    "date": item.checkpoint.date.isoformat(),
                    "expected_MB": item.checkpoint.mb,
                    "actual_MB": item.actual_mb,
                    "passed": item.passed,
                }
                for item in report
            ],
        }
        _emit(json.dumps(data, indent=2, sort_keys=True), args.out)
        return 0
    series = scenario.series_csv(result)
    if args.out:
        Path(args.out).write_text(series, encoding="utf-8")
        table_stream = sys.stdout
    else:
        sys.stdout.write(series)
        table_stream = sys.stderr
    lines = _schedule_lines(result)
    if checkpoints:
        lines += [""] + _checkpoint_lines(report, table_stream)
    print("\n".join(lines), file=table_stream)
    return 0


def cmd_ledger(args) -> int:
    scn, _ = _load_scenario(args)
    result = scenario.run(scn)
    if args.output == "json":
        _emit(balances_snapshot_json(result.final_sector) + "\n", args.out)
    else:
        _emit(transaction_log_csv(result.final_sector), args.out)
    return 0


# --- fit-agio --------------------------------------------------------------------


def cmd_fit_agio(args) -> int:
    observations = market.load_observations(args.observations)
    model = market.fit(observations)
    resid = market.residuals(model, observations)
    if args.output == "json":
        data = {
            "kappa": model.kappa,
            "m_ref": model.m_ref,
            "agio_ref": model.agio_ref,
            "residuals": [
                {"label": obs.label, "residual": value}
                for obs, value in zip(observations, resid)
            ],
        }
        _emit(json.dumps(data, indent=2, sort_keys=True), args.out)
        return 0
    lines = [
        f"kappa,{model.kappa!r}",
        f"m_ref,{model.m_ref!r}",
        f"agio_ref,{model.agio_ref!r}",
        "",
        "label,money_stock,agio,residual",
    ]
    for obs, value in zip(observations, resid):
        lines.append(f'"{obs.label}",{obs.money_stock},{obs.agio!r},{value!r}')
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--output", choices=("csv", "json"), default="csv", help="report encoding"
    )
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"seed for anything stochastic (default {DEFAULT_SEED})",
    )

    parser = argparse.ArgumentParser(
        prog="giro-sim",
        description="Balance-sheet simulator for money-financed fiscal stimulus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "optimize", parents=[common], help="optimal monetization for a parameter file"
    )
    p.add_argument("--params", required=True, help="key = value parameter file")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser(
        "politics", parents=[common], help="median-voter analysis of a population"
    )
    p.add_argument("--params", required=True, help="key = value parameter file")
    p.add_argument("--population", required=True, help="theta_j,b_j CSV file")
    p.add_argument(
        "--beta", type=float, default=0.25, help="transfer share under vote (default 0.25)"
    )
    p.add_argument(
        "--grid-step", type=float, default=0.01, help="monetization grid step"
    )
    p.set_defaults(handler=cmd_politics)

    for name, handler, help_text in (
        ("replay", cmd_replay, "run a scenario and export its series"),
        ("ledger", cmd_ledger, "transaction log / balances of a scenario run"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--scenario", help="scenario file path")
        group.add_argument("--builtin", help="built-in scenario name (venice)")
        p.set_defaults(handler=handler)

    p = sub.add_parser(
        "fit-agio", parents=[common], help="calibrate the premium curve"
    )
    p.add_argument("observations", help="label,money_stock,agio CSV file")
    p.set_defaults(handler=cmd_fit_agio)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, EmptyPopulation) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 4
    except (
        DomainError,
        Infeasible,
        NoFeasiblePolicy,
        DegenerateFit,
        NoCondorcetWinner,
        LedgerError,
    ) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
