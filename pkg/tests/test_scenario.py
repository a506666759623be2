"""Timeline replay: the Venice record, file round-trips, determinism."""

import datetime as dt

import pytest

from giro_sim import ledger, scenario
from giro_sim.errors import NegativeBalance, ParseError, ValidationError
from giro_sim.market import AgioObservation
from giro_sim.policy import ModelParams
from giro_sim.scenario import (
    Event,
    EventKind,
    Scenario,
    checkpoint_report,
    run,
    series_csv,
    venice_1629_builtin,
)

PARAMS = ModelParams(eta=0.5, i=0.07, phi=0.14)


def minimal_scenario(events=(), initial=(), observations=()):
    return Scenario(
        params=PARAMS,
        start=dt.date(1620, 1, 1),
        initial=initial,
        events=events,
        agio_observations=observations,
    )


class TestEventValidation:
    def test_negative_amount_rejected(self):
        with pytest.raises(ValidationError):
            Event(dt.date(1630, 1, 1), EventKind.NET_WORTH_HELICOPTER, -5)

    def test_zero_amount_rejected(self):
        with pytest.raises(ValidationError):
            Event(dt.date(1630, 1, 1), EventKind.REVERSAL_BAILOUT, 0)

    def test_missing_amount_rejected(self):
        with pytest.raises(ValidationError):
            Event(dt.date(1630, 1, 1), EventKind.CLASSICAL_EXPANSION)

    def test_observe_takes_no_amount(self):
        with pytest.raises(ValidationError):
            Event(dt.date(1630, 1, 1), EventKind.OBSERVE, 5)

    def test_event_before_start_rejected(self):
        with pytest.raises(ValidationError):
            minimal_scenario(
                events=(Event(dt.date(1619, 1, 1), EventKind.OBSERVE),)
            )

    def test_unbalanced_opening_rejected(self):
        with pytest.raises(ValidationError):
            minimal_scenario(initial=((ledger.MONETARY_MB, 100),))

    def test_negative_opening_non_net_worth_rejected(self):
        with pytest.raises(ValidationError):
            minimal_scenario(
                initial=((ledger.MONETARY_BR, -100), (ledger.MONETARY_BW, -100))
            )


class TestRun:
    def test_empty_event_list_gives_a_single_opening_snapshot(self):
        result = run(minimal_scenario())
        assert len(result.series) == 1
        assert result.series[0].date == dt.date(1620, 1, 1)
        assert result.series[0].mb == 0

    def test_every_event_gets_a_snapshot(self):
        events = (
            Event(dt.date(1620, 2, 1), EventKind.NET_WORTH_HELICOPTER, 100),
            Event(dt.date(1620, 3, 1), EventKind.OBSERVE, note="mid"),
        )
        result = run(minimal_scenario(events=events))
        assert [snap.date for snap in result.series] == [
            dt.date(1620, 1, 1),
            dt.date(1620, 2, 1),
            dt.date(1620, 3, 1),
        ]

    def test_events_apply_in_date_order_regardless_of_authoring_order(self):
        events = (
            Event(dt.date(1620, 3, 1), EventKind.REVERSAL_BAILOUT, 50),
            Event(dt.date(1620, 2, 1), EventKind.NET_WORTH_HELICOPTER, 100),
        )
        result = run(minimal_scenario(events=events))
        assert result.series[-1].mb == 50

    def test_all_strategy_kinds_apply(self):
        events = (
            Event(dt.date(1620, 2, 1), EventKind.ENDOW, 1_000, note="treasury assets"),
            Event(dt.date(1620, 3, 1), EventKind.NET_WORTH_HELICOPTER, 500),
            Event(dt.date(1620, 4, 1), EventKind.MONETARY_BASE_HELICOPTER, 200),
            Event(dt.date(1620, 5, 1), EventKind.CLASSICAL_EXPANSION, 100),
            Event(dt.date(1620, 6, 1), EventKind.REVERSAL_BAILOUT, 300),
        )
        result = run(minimal_scenario(events=events))
        final = result.final_sector
        final.check_invariants()
        assert final.balance(ledger.MONETARY_MB) == 400
        assert final.balance(ledger.FISCAL_TA) == 1_000

    def test_ledger_violations_carry_the_event_date(self):
        events = (Event(dt.date(1620, 2, 1), EventKind.REVERSAL_BAILOUT, 50),)
        with pytest.raises(NegativeBalance, match="1620-02-01"):
            run(minimal_scenario(events=events))

    def test_funded_debt_schedule_records_conversions(self):
        events = (
            Event(dt.date(1620, 2, 1), EventKind.NET_WORTH_HELICOPTER, 100),
            Event(
                dt.date(1620, 3, 1),
                EventKind.REVERSAL_BAILOUT,
                60,
                rate=0.07,
                note="conversion",
            ),
        )
        result = run(minimal_scenario(events=events))
        assert len(result.funded_debt_schedule) == 1
        debt = result.funded_debt_schedule[0]
        assert (debt.principal, debt.rate) == (60, 0.07)
        assert scenario.annual_debt_service(result.funded_debt_schedule) == (
            pytest.approx(4.2, abs=1e-12)
        )

    def test_agio_appears_once_the_model_is_set(self):
        observations = (
            AgioObservation("a", 1_000, 0.1),
            AgioObservation("b", 2_000, -0.1),
        )
        events = (
            Event(dt.date(1620, 2, 1), EventKind.NET_WORTH_HELICOPTER, 1_000),
            Event(dt.date(1620, 3, 1), EventKind.SET_AGIO_MODEL),
            Event(dt.date(1620, 4, 1), EventKind.NET_WORTH_HELICOPTER, 1_000),
        )
        result = run(minimal_scenario(events=events, observations=observations))
        assert result.series[1].agio is None
        assert result.series[2].agio == pytest.approx(0.1, abs=1e-12)
        assert result.series[3].agio == pytest.approx(-0.1, abs=1e-12)


class TestVenice:
    def test_documented_balance_readings_hit_exactly(self):
        result = run(venice_1629_builtin())
        by_date = {snap.date: snap.mb for snap in result.series}
        assert by_date[dt.date(1630, 4, 30)] == 2_071_168
        assert by_date[dt.date(1630, 6, 30)] == 2_666_926
        assert by_date[dt.date(1630, 12, 31)] == 1_400_000
        assert by_date[dt.date(1638, 1, 1)] == 900_000

    def test_checkpoint_report_passes(self):
        result = run(venice_1629_builtin())
        report = checkpoint_report(result, scenario.VENICE_CHECKPOINTS)
        assert len(report) == 4
        assert all(item.passed for item in report)

    def test_reform_conversion_in_the_debt_schedule(self):
        result = run(venice_1629_builtin())
        principals = {(d.principal, d.rate) for d in result.funded_debt_schedule}
        assert (716_652, 0.07) in principals

    def test_net_worth_decline_equals_cumulative_unbacked_issue(self):
        # Losses move between the two authorities but never disappear.
        scn = venice_1629_builtin()
        result = run(scn)
        initial = result.series[0].consolidated_net_worth
        issued = 0
        events = sorted(scn.events, key=lambda e: e.date)
        snapshots = result.series[1:]
        for event, snap in zip(events, snapshots):
            if event.kind is EventKind.NET_WORTH_HELICOPTER:
                issued += event.amount
            assert initial - snap.consolidated_net_worth == issued

    def test_agio_falls_with_issue_and_recovers_with_the_reform(self):
        result = run(venice_1629_builtin())
        dated = {snap.date: snap for snap in result.series}
        rise = [
            dated[dt.date(1629, 1, 15)].agio,
            dated[dt.date(1630, 4, 30)].agio,
            dated[dt.date(1630, 6, 30)].agio,
        ]
        assert all(a > b for a, b in zip(rise, rise[1:]))
        recovery = [
            dated[dt.date(1630, 6, 30)].agio,
            dated[dt.date(1630, 12, 31)].agio,
            dated[dt.date(1638, 1, 1)].agio,
        ]
        assert all(a < b for a, b in zip(recovery, recovery[1:]))

    def test_balance_sheets_stay_balanced_throughout(self):
        result = run(venice_1629_builtin())
        result.final_sector.check_invariants()
        rebuilt = ledger.replay(result.final_sector.history)
        assert rebuilt == result.final_sector


class TestSeriesExport:
    def test_header_and_venice_peak_row(self):
        result = run(venice_1629_builtin())
        text = series_csv(result)
        lines = text.splitlines()
        assert lines[0] == "date,MB,BW,TW,TB_fiscal,consolidated_net_worth,agio"
        assert any(line.startswith("1630-06-30,2666926,") for line in lines)

    def test_opening_snapshot_has_no_agio(self):
        result = run(venice_1629_builtin())
        first_row = series_csv(result).splitlines()[1]
        assert first_row.endswith(",")

    def test_export_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        scenario.export_csv(run(venice_1629_builtin()), a)
        scenario.export_csv(run(venice_1629_builtin()), b)
        assert a.read_bytes() == b.read_bytes()

    def test_empty_scenario_exports_header_plus_opening_row(self):
        text = series_csv(run(minimal_scenario()))
        assert len(text.splitlines()) == 2


class TestScenarioFiles:
    def test_venice_round_trips(self):
        venice = venice_1629_builtin()
        assert scenario.loads(scenario.dumps(venice)) == venice

    def test_save_load_round_trip(self, tmp_path):
        path = tmp_path / "venice.scn"
        scenario.save(venice_1629_builtin(), path)
        assert scenario.load(path) == venice_1629_builtin()

    def test_loaded_file_replays_identically(self, tmp_path):
        path = tmp_path / "venice.scn"
        scenario.save(venice_1629_builtin(), path)
        assert series_csv(run(scenario.load(path))) == series_csv(
            run(venice_1629_builtin())
        )

    def test_negative_amount_in_file_is_a_validation_error(self):
        text = (
            "[params]\neta = 0.5\ni = 0.07\nphi = 0.14\n"
            "[initial]\ndate = 1620-01-01\n"
            "[events]\n1620-02-01 NetWorthHelicopter -5 \"bad\"\n"
        )
        with pytest.raises(ValidationError):
            scenario.loads(text)

    def test_unknown_event_kind_is_a_parse_error(self):
        text = (
            "[params]\neta = 0.5\ni = 0.07\nphi = 0.14\n"
            "[initial]\ndate = 1620-01-01\n"
            "[events]\n1620-02-01 Splurge 5\n"
        )
        with pytest.raises(ParseError, match="line 8"):
            scenario.loads(text)

    def test_missing_start_date_is_a_validation_error(self):
        text = "[params]\neta = 0.5\ni = 0.07\nphi = 0.14\n"
        with pytest.raises(ValidationError):
            scenario.loads(text)

    def test_content_outside_sections_is_a_parse_error(self):
        with pytest.raises(ParseError):
            scenario.loads("eta = 0.5\n")

    def test_comments_and_blanks_ignored(self):
        text = (
            "# a scenario\n\n[params]\neta = 0.5\ni = 0.07\nphi = 0.14\n\n"
            "[initial]\ndate = 1620-01-01\n\n[events]\n# none yet\n"
        )
        scn = scenario.loads(text)
        assert scn.events == ()
