"""Scenario runner: load a config, drive the engine, write auditable reports.

    demurrage <subcommand> --config <path-or-bundled-name> [--out DIR]
                           [--day N] [--units N]

Subcommands: quote, redeem, buyback, calibrate, overdue, solvency, replay,
validate. Each writes <subcommand>.csv and <subcommand>_summary.json into the
output directory (--out, else $DEMURRAGE_OUT_DIR, else ./reports). Exit
codes: 0 ok, 2 config invalid, 3 domain error, 4 I/O error.
"""

import argparse
import os
import sys
from pathlib import Path

from . import ledger as ledger_mod
from .calibration import calibrate, min_extraction_rate
from .certificates import (
    CertificateSeries,
    buyback_value,
    in_kind_purchase_cost,
    marked_unit_weight,
    purchase_price,
    redemption_settlement,
)
from .errors import DemurrageError, ScenarioError
from .overdue import overdue_coefficient, peer_max, peer_mean, successor_coefficient
from .reports import ReportRow, inputs_field, write_rows, write_summary, write_table
from .scenario import (
    Scenario,
    TradeDefaults,
    load_raw,
    load_scenario,
    resolve_config,
    validate_raw,
)
from .solvency import breakeven_horizon, simulate_issuer

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

OUT_DIR_ENV = "DEMURRAGE_OUT_DIR"


def _resolve_trade(
    scenario: Scenario,
    section: TradeDefaults | None,
    name: str,
    day_flag: int | None,
    units_flag: int | None,
) -> tuple[CertificateSeries, int, int, int]:
    """Apply --day/--units overrides to a trade section; returns
    (series, day, units, elapsed_days)."""
    if section is None:
        raise ScenarioError(
            f"scenario has no [{name}] section",
            [(name, "section required by this subcommand")],
        )
    day = day_flag if day_flag is not None else section.day
    units = units_flag if units_flag is not None else section.units
    series = scenario.series[section.series_id]
    if units < 1:
        raise ScenarioError(f"units must be >= 1: {units}", [(f"{name}.units", "must be >= 1")])
    if day < series.issue_day:
        raise ScenarioError(
            f"day {day} precedes series issue day {series.issue_day}",
            [(f"{name}.day", "before issue")],
        )
    if day > series.expiry_day and scenario.overdue is None:
        raise ScenarioError(
            f"day {day} is past expiry day {series.expiry_day} "
            "and no [overdue] section is configured",
            [(f"{name}.day", "past expiry")],
        )
    return series, day, units, day - series.issue_day


def _series_inputs(series: CertificateSeries, elapsed: int) -> dict:
    return {
        "survival": series.survival_coefficient,
        "unit_weight_g": series.unit_weight.grams,
        "elapsed_days": elapsed,
    }


def run_quote(scenario: Scenario, args, out: Path) -> dict:
    series, day, units, elapsed = _resolve_trade(
        scenario, scenario.quote, "quote", args.day, args.units
    )
    markup = scenario.quote.markup
    quote = scenario.price_at(day, series.metal)
    marked = marked_unit_weight(series, elapsed)
    unit_price = purchase_price(series, 1, elapsed, quote, markup)
    rows = [
        ReportRow(
            "residual_weight", series.series_id, day, 1,
            inputs_field(**_series_inputs(series, elapsed)),
            str(marked.grams), "g", "half_even_4dp",
        ),
        ReportRow(
            "purchase_price", series.series_id, day, 1,
            inputs_field(
                price_per_troy_ounce=quote.price_per_troy_ounce,
                markup=markup,
                marked_unit_weight_g=marked.grams,
            ),
            str(unit_price.amount), quote.currency, "half_even_2dp",
        ),
    ]
    total_price = unit_price
    if units != 1:
        total_price = purchase_price(series, units, elapsed, quote, markup)
        rows.append(
            ReportRow(
                "purchase_price", series.series_id, day, units,
                inputs_field(
                    price_per_troy_ounce=quote.price_per_troy_ounce,
                    markup=markup,
                    marked_unit_weight_g=marked.grams,
                ),
                str(total_price.amount), quote.currency, "half_even_2dp",
            )
        )
    write_rows(out / "quote.csv", rows)
    summary = {
        "subcommand": "quote",
        "scenario": scenario.name,
        "series": series.series_id,
        "day": day,
        "units": units,
        "currency": quote.currency,
        "marked_unit_weight_g": str(marked.grams),
        "unit_price": str(unit_price.amount),
        "total_price": str(total_price.amount),
        # totals price the 4-digit marked unit weight, not the full-precision
        # aggregate; the two bases differ once units are large
        "pricing_basis": "marked_unit_weight_4dp",
    }
    write_summary(out / "quote_summary.json", summary)
    return summary


def run_redeem(scenario: Scenario, args, out: Path) -> dict:
    series, day, units, elapsed = _resolve_trade(
        scenario, scenario.redeem, "redeem", args.day, args.units
    )
    quote = scenario.price_at(day, series.metal)
    settlement = redemption_settlement(series, units, elapsed, quote)
    gap = settlement.deliverable - settlement.redeemable
    rows = [
        ReportRow(
            "redeemable_weight", series.series_id, day, units,
            inputs_field(
                **_series_inputs(series, elapsed),
                delivery_fee_rate=series.delivery_fee_rate,
            ),
            str(settlement.redeemable.grams), "g", "half_even_4dp",
        ),
        ReportRow(
            "deliverable_weight", series.series_id, day, units,
            inputs_field(min_delivery_weight_g=series.min_delivery_weight.grams),
            str(settlement.deliverable.settled.grams), "g", "lot_ceiling",
        ),
        ReportRow(
            "redemption_top_up", series.series_id, day, units,
            inputs_field(
                gap_g=gap.grams,
                price_per_troy_ounce=quote.price_per_troy_ounce,
            ),
            str(settlement.top_up.amount), quote.currency, "half_even_2dp",
        ),
    ]
    write_rows(out / "redeem.csv", rows)
    summary = {
        "subcommand": "redeem",
        "scenario": scenario.name,
        "series": series.series_id,
        "day": day,
        "units": units,
        "currency": quote.currency,
        "redeemable_weight_g": str(settlement.redeemable.grams),
        "deliverable_weight_g": str(settlement.deliverable.settled.grams),
        "top_up": str(settlement.top_up.amount),
    }
    write_summary(out / "redeem_summary.json", summary)
    return summary


def run_buyback(scenario: Scenario, args, out: Path) -> dict:
    series, day, units, elapsed = _resolve_trade(
        scenario, scenario.buyback, "buyback", args.day, args.units
    )
    quote = scenario.price_at(day, series.metal)
    value = buyback_value(series, units, elapsed, quote)
    chargeable = value.chargeable.settled
    rows = [
        ReportRow(
            "buyback_chargeable_weight", series.series_id, day, units,
            inputs_field(
                **_series_inputs(series, elapsed),
                repo_fee_rate=series.repo_fee_rate,
            ),
            str(chargeable.grams), "g", "half_even_4dp",
        ),
        ReportRow(
            "buyback_payout", series.series_id, day, units,
            inputs_field(
                chargeable_g=chargeable.grams,
                price_per_troy_ounce=quote.price_per_troy_ounce,
            ),
            str(value.payout.amount), quote.currency, "half_even_2dp",
        ),
    ]
    write_rows(out / "buyback.csv", rows)
    summary = {
        "subcommand": "buyback",
        "scenario": scenario.name,
        "series": series.series_id,
        "day": day,
        "units": units,
        "currency": quote.currency,
        "chargeable_weight_g": str(chargeable.grams),
        "payout": str(value.payout.amount),
    }
    write_summary(out / "buyback_summary.json", summary)
    return summary


def run_calibrate(scenario: Scenario, args, out: Path) -> dict:
    section = scenario.calibration
    if section is None:
        raise ScenarioError(
            "scenario has no [calibration] section",
            [("calibration", "section required by this subcommand")],
        )
    result = calibrate(
        section.forecasts, section.backlog_correction, section.interval_unit
    )
    rows = []
    for forecast in section.forecasts:
        rows.append(
            ReportRow(
                "min_extraction_rate", "-", forecast.interval_index, "-",
                inputs_field(
                    storage_cost_per_gram=forecast.storage_cost_per_gram.amount,
                    metal_price_per_gram=forecast.metal_price_per_gram.amount,
                ),
                str(min_extraction_rate(forecast)),
                f"fraction/{section.interval_unit}", "exact",
            )
        )
    aggregate = [
        ("mean_extraction_rate", result.mean_rate, "arithmetic_mean"),
        ("geometric_mean_rate", result.geometric_mean_rate, "audit_alternative"),
        ("backlog_correction", result.backlog_correction, "configured"),
        ("extraction_rate", result.extraction_rate, "mean_plus_correction"),
        ("survival_coefficient", result.survival_coefficient, "one_minus_extraction"),
    ]
    for name, value, how in aggregate:
        rows.append(
            ReportRow(
                name, "-", "-", "-",
                inputs_field(intervals=len(section.forecasts)),
                str(value), f"fraction/{section.interval_unit}", how,
            )
        )
    write_rows(out / "calibrate.csv", rows)
    summary = {
        "subcommand": "calibrate",
        "scenario": scenario.name,
        "intervals": len(section.forecasts),
        "interval_unit": section.interval_unit,
        "mean_extraction_rate": str(result.mean_rate),
        "geometric_mean_rate": str(result.geometric_mean_rate),
        "backlog_correction": str(result.backlog_correction),
        "extraction_rate": str(result.extraction_rate),
        "survival_coefficient": str(result.survival_coefficient),
    }
    write_summary(out / "calibrate_summary.json", summary)
    return summary


def run_overdue(scenario: Scenario, args, out: Path) -> dict:
    section = scenario.overdue
    if section is None:
        raise ScenarioError(
            "scenario has no [overdue] section",
            [("overdue", "section required by this subcommand")],
        )
    expired = scenario.series[section.expired_series_id]
    successor = successor_coefficient(section.own_versions, expired.expiry_day)
    rows = [
        ReportRow(
            "successor_coefficient", expired.series_id, expired.expiry_day, "-",
            inputs_field(own_versions=len(section.own_versions)),
            "none" if successor is None else str(successor),
            "fraction/interval", "exact",
        )
    ]
    summary = {
        "subcommand": "overdue",
        "scenario": scenario.name,
        "series": expired.series_id,
        "expiry_day": expired.expiry_day,
        "lookback_days": section.lookback_days,
        "successor_coefficient": None if successor is None else str(successor),
    }
    if successor is not None:
        applied, source = successor, "successor_series"
    else:
        mean = peer_mean(section.peers)
        peak = peer_max(section.peers)
        blended = overdue_coefficient(section.peers, section.policy)
        peers_input = inputs_field(
            peers=len(section.peers), lookback_days=section.lookback_days
        )
        rows += [
            ReportRow(
                "peer_mean", expired.series_id, expired.expiry_day, "-",
                peers_input, str(mean), "fraction/interval", "exact",
            ),
            ReportRow(
                "peer_max", expired.series_id, expired.expiry_day, "-",
                peers_input, str(peak), "fraction/interval", "exact",
            ),
            ReportRow(
                "overdue_coefficient", expired.series_id, expired.expiry_day, "-",
                inputs_field(blend_alpha=section.policy.blend_alpha),
                str(blended), "fraction/interval", "mean_plus_alpha_max",
            ),
        ]
        summary.update(
            peer_mean=str(mean), peer_max=str(peak), overdue_coefficient=str(blended)
        )
        applied, source = blended, "peer_blend"
    rows.append(
        ReportRow(
            "applied_coefficient", expired.series_id, expired.expiry_day, "-",
            inputs_field(source=source),
            str(applied), "fraction/interval", "exact",
        )
    )
    write_rows(out / "overdue.csv", rows)
    summary["applied_coefficient"] = str(applied)
    summary["source"] = source
    write_summary(out / "overdue_summary.json", summary)
    return summary


def run_solvency(scenario: Scenario, args, out: Path) -> dict:
    section = scenario.solvency
    if section is None:
        raise ScenarioError(
            "scenario has no [solvency] section",
            [("solvency", "section required by this subcommand")],
        )
    result = simulate_issuer(
        section.timeline,
        section.fees,
        section.horizon_days,
        section.invest_yield_per_gram_day,
    )
    horizon = breakeven_horizon(section.fees)
    write_table(
        out / "solvency.csv",
        (
            (
                row.day,
                str(row.cumulative_profit),
                str(row.cumulative_cost),
                str(row.cumulative_yield),
                str(row.margin),
                "true" if row.insolvent else "false",
            )
            for row in result.rows
        ),
        columns=(
            "day",
            "cumulative_profit",
            "cumulative_cost",
            "cumulative_yield",
            "margin",
            "insolvent",
        ),
    )
    summary = {
        "subcommand": "solvency",
        "scenario": scenario.name,
        "currency": result.currency,
        "horizon_days": section.horizon_days,
        "first_insolvency_day": result.first_insolvency_day,
        "breakeven_days": "never" if horizon is None else str(horizon),
        "final_profit": str(result.final.cumulative_profit),
        "final_cost": str(result.final.cumulative_cost),
        "final_margin": str(result.final.margin),
        "insolvent_at_horizon": result.final.insolvent,
    }
    write_summary(out / "solvency_summary.json", summary)
    return summary


def build_ledger_events(scenario: Scenario) -> list[ledger_mod.LedgerEvent]:
    """Turn the scenario timeline into priced, settled ledger events."""
    staged: list[tuple[int, int, int, str, object]] = []
    for i, (sid, series) in enumerate(sorted(scenario.series.items())):
        staged.append(
            (series.issue_day, 0, i, sid, ledger_mod.SeriesIssued(series))
        )
    for i, entry in enumerate(scenario.timeline):
        series = scenario.series[entry.series_id]
        elapsed = entry.day - series.issue_day
        if entry.kind == "sell":
            quote = scenario.price_at(entry.day, series.metal)
            price = purchase_price(series, entry.units, elapsed, quote, entry.markup)
            action = ledger_mod.UnitsSold(entry.units, price, entry.counterparty)
        elif entry.kind == "sell_in_kind":
            cost = in_kind_purchase_cost(series, entry.units, elapsed)
            action = ledger_mod.UnitsSoldInKind(
                entry.units, cost.metal_due, cost.fee, entry.counterparty
            )
        elif entry.kind == "transfer":
            action = ledger_mod.Transferred(
                entry.units, entry.counterparty, entry.recipient
            )
        elif entry.kind == "redeem":
            quote = scenario.price_at(entry.day, series.metal)
            settlement = redemption_settlement(series, entry.units, elapsed, quote)
            action = ledger_mod.Redeemed(
                entry.units,
                entry.counterparty,
                settlement.deliverable,
                settlement.top_up,
            )
        elif entry.kind == "buyback":
            quote = scenario.price_at(entry.day, series.metal)
            value = buyback_value(series, entry.units, elapsed, quote)
            action = ledger_mod.BoughtBack(
                entry.units, entry.counterparty, value.payout
            )
        else:
            raise ScenarioError(f"unknown timeline kind {entry.kind!r}")
        staged.append((entry.day, 1, i, entry.series_id, action))

    staged.sort(key=lambda item: (item[0], item[1], item[2]))
    return [
        ledger_mod.LedgerEvent(sequence=seq, day=day, series_id=sid, action=action)
        for seq, (day, _, _, sid, action) in enumerate(staged, start=1)
    ]


def run_replay(scenario: Scenario, args, out: Path) -> dict:
    events = build_ledger_events(scenario)
    state = ledger_mod.EMPTY_STATE
    table = []
    for event in events:
        state = ledger_mod.append(state, event)
        account = state.accounts[event.series_id]
        table.append(
            (
                event.sequence,
                event.day,
                event.series_id,
                event.kind,
                account.outstanding_units,
                str(account.vault_grams),
                str(account.holder_claims_grams(account.as_of_day)),
                str(account.issuer_accrued_grams),
                str(account.conservation_gap()),
            )
        )
    write_table(
        out / "replay.csv",
        table,
        columns=(
            "sequence",
            "day",
            "series",
            "kind",
            "outstanding_units",
            "vault_g",
            "holder_claims_g",
            "issuer_accrued_g",
            "conservation_gap_g",
        ),
    )
    ledger_mod.write_log(events, out / "ledger.log")
    ledger_mod.write_snapshot(state, out / "state.json")
    summary = {
        "subcommand": "replay",
        "scenario": scenario.name,
        "events": len(events),
        "last_day": state.last_day,
        "series": {
            sid: {
                "outstanding_units": account.outstanding_units,
                "vault_g": str(account.vault_grams),
                "issuer_accrued_g": str(account.issuer_accrued_grams),
                "extracted_g": str(account.extracted_grams),
            }
            for sid, account in sorted(state.accounts.items())
        },
    }
    write_summary(out / "replay_summary.json", summary)
    return summary


RUNNERS = {
    "quote": run_quote,
    "redeem": run_redeem,
    "buyback": run_buyback,
    "calibrate": run_calibrate,
    "overdue": run_overdue,
    "solvency": run_solvency,
    "replay": run_replay,
}


def run_validate(config_ref: str) -> int:
    try:
        path = resolve_config(config_ref)
        raw = load_raw(path)
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    diagnostics = validate_raw(raw)
    if not diagnostics:
        print("ok: scenario is valid")
        return EXIT_OK
    for diagnostic in diagnostics:
        print(f"invalid: {diagnostic}", file=sys.stderr)
    return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="demurrage",
        description=(
            "Lifecycle engine for commodity-backed certificates whose face "
            "weight decays to fund vault storage."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in (*RUNNERS, "validate"):
        cmd = sub.add_parser(name)
        cmd.add_argument(
            "--config", required=True,
            help="scenario file path, or the name of a bundled scenario",
        )
        if name != "validate":
            cmd.add_argument(
                "--out", default=None,
                help=f"output directory (default ${OUT_DIR_ENV} or ./reports)",
            )
            cmd.add_argument("--day", type=int, default=None)
            cmd.add_argument("--units", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "validate":
        return run_validate(args.config)

    try:
        path = resolve_config(args.config)
        scenario = load_scenario(path)
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        for field_path, message in exc.diagnostics:
            print(f"  {field_path}: {message}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO

    out = Path(args.out or os.environ.get(OUT_DIR_ENV) or "reports")
    try:
        out.mkdir(parents=True, exist_ok=True)
        summary = RUNNERS[args.subcommand](scenario, args, out)
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DemurrageError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    for key, value in summary.items():
        if key != "subcommand" and not isinstance(value, dict):
            print(f"{key}: {value}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
