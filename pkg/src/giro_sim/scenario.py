"""Dated policy timelines replayed against the double-entry engine.

A scenario bundles model parameters, an opening balance-sheet endowment,
a list of dated events, and market observations used to calibrate the
agio curve. Running it applies the events in date order and records a
balance snapshot after each one, giving deterministic time series of
money stock, net worths and the predicted premium on bank money.

The built-in scenario replays the Banco del Giro through the 1629-31
famine and plague: unbacked issue of scriptural money swells the bank's
balances from one million to 2,666,926 ducats, the September 24, 1630
reform converts 716,652 ducats of sight money into 7% funded debt, and
further conversions bring balances to 1.4 million by year-end and to the
stable 900,000 level by 1638. Documented figures carry their dates;
bridging amounts are labeled reconstructed.

Scenario file format (``#`` comments and blank lines ignored)::

    [params]
    eta = 0.5              # ModelParams keys
    [initial]
    date = 1619-06-01      # opening snapshot date
    monetary.assets.BR = 150000
    [events]
    1620-01-15 NetWorthHelicopter 200000 "balance raised to 700,000"
    1630-09-24 ReversalBailout 716652 rate=0.07 "reform"
    1629-01-15 SetAgioModel "calibrate premium curve"
    [agio]
    "early 1629" 1000000 0.195

Event lines are ``date kind [amount] [rate=R] ["note"]``. Amount-bearing
kinds are Endow, NetWorthHelicopter, MonetaryBaseHelicopter,
ClassicalExpansion and ReversalBailout; SetAgioModel refits the premium
curve from the [agio] observations; Observe only records a snapshot.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import shlex
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import ledger, market
from .errors import (
    DegenerateFit,
    DomainError,
    LedgerError,
    ParseError,
    ValidationError,
)
from .ledger import ALL_POSITIONS, Position, PublicSector, Transaction
from .market import AgioModel, AgioObservation
from .policy import ModelParams


class EventKind(Enum):
    ENDOW = "Endow"
    NET_WORTH_HELICOPTER = "NetWorthHelicopter"
    MONETARY_BASE_HELICOPTER = "MonetaryBaseHelicopter"
    CLASSICAL_EXPANSION = "ClassicalExpansion"
    REVERSAL_BAILOUT = "ReversalBailout"
    SET_AGIO_MODEL = "SetAgioModel"
    OBSERVE = "Observe"


AMOUNT_KINDS = frozenset(
    {
        EventKind.ENDOW,
        EventKind.NET_WORTH_HELICOPTER,
        EventKind.MONETARY_BASE_HELICOPTER,
        EventKind.CLASSICAL_EXPANSION,
        EventKind.REVERSAL_BAILOUT,
    }
)


@dataclass(frozen=True)
class Event:
    """One dated step of a timeline.

    ``rate`` is annotation except on ReversalBailout, where it is the
    interest rate of the funded debt the conversion creates.
    """

    date: dt.date
    kind: EventKind
    amount: int | None = None
    rate: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.kind in AMOUNT_KINDS:
            if not isinstance(self.amount, int) or isinstance(self.amount, bool):
                raise ValidationError(
                    f"{self.kind.value} needs an integer ducat amount, got {self.amount!r}"
                )
            if self.amount <= 0:
                raise ValidationError(
                    f"{self.kind.value} amount must be positive, got {self.amount}"
                )
        elif self.amount is not None:
            raise ValidationError(f"{self.kind.value} takes no amount")
        if self.rate is not None and not self.rate >= 0.0:
            raise ValidationError(f"rate must be >= 0, got {self.rate}")
        if '"' in self.note or "\n" in self.note:
            raise ValidationError("event notes may not contain quotes or newlines")


def _position_index(position: Position) -> int:
    return ALL_POSITIONS.index(position)


@dataclass(frozen=True)
class Scenario:
    """Parameters, opening endowment, events and market observations."""

    params: ModelParams
    start: dt.date
    initial: tuple[tuple[Position, int], ...] = ()
    events: tuple[Event, ...] = ()
    agio_observations: tuple[AgioObservation, ...] = ()

    def __post_init__(self):
        normalized = tuple(
            sorted(
                ((p, a) for p, a in self.initial if a != 0),
                key=lambda pair: _position_index(pair[0]),
            )
        )
        object.__setattr__(self, "initial", normalized)
        for position, amount in normalized:
            if isinstance(amount, bool) or not isinstance(amount, int):
                raise ValidationError(
                    f"endowment amounts are integer ducats, got {amount!r}"
                )
            if amount < 0 and position not in ledger.NET_WORTH_POSITIONS:
                raise ValidationError(
                    f"opening {position.key} may not be negative ({amount})"
                )
        for authority in ledger.Authority:
            assets = sum(
                a
                for p, a in normalized
                if p.authority is authority and p.side is ledger.Side.ASSET
            )
            liabilities = sum(
                a
                for p, a in normalized
                if p.authority is authority and p.side is ledger.Side.LIABILITY
            )
            if assets != liabilities:
                raise ValidationError(
                    f"opening {authority.value} sheet off balance: assets {assets}, "
                    f"liabilities {liabilities}"
                )
        for event in self.events:
            if event.date < self.start:
                raise ValidationError(
                    f"event on {event.date.isoformat()} predates the scenario start "
                    f"{self.start.isoformat()}"
                )


@dataclass(frozen=True)
class Snapshot:
    """Balance readings after one event (or the opening state)."""

    date: dt.date
    mb: int
    bw: int
    tw: int
    tb_fiscal: int
    consolidated_net_worth: int
    agio: float | None


@dataclass(frozen=True)
class FundedDebt:
    """Interest-bearing debt created by a conversion event."""

    date: dt.date
    principal: int
    rate: float | None
    note: str = ""


@dataclass(frozen=True)
class RunResult:
    series: tuple[Snapshot, ...]
    funded_debt_schedule: tuple[FundedDebt, ...]
    final_sector: PublicSector
    agio_model: AgioModel | None = None


def _snapshot(date: dt.date, sector: PublicSector, model: AgioModel | None) -> Snapshot:
    mb = sector.balance(ledger.MONETARY_MB)
    agio = None
    if model is not None and mb > 0:
        agio = market.predict(model, mb)
    return Snapshot(
        date=date,
        mb=mb,
        bw=sector.balance(ledger.MONETARY_BW),
        tw=sector.balance(ledger.FISCAL_TW),
        tb_fiscal=sector.balance(ledger.FISCAL_TB),
        consolidated_net_worth=ledger.consolidated_net_worth(sector),
        agio=agio,
    )


def run(scenario: Scenario) -> RunResult:
    """Apply the events in date order; a pure function of the scenario.

    Ledger violations are re-raised with the offending event's date and
    note attached. The event order within one date follows the authored
    order (stable sort).
    """
    sector = PublicSector.empty()
    if scenario.initial:
        sector = ledger.post(
            sector, Transaction(postings=scenario.initial, label="opening endowment")
        )
    model: AgioModel | None = None
    series = [_snapshot(scenario.start, sector, model)]
    schedule: list[FundedDebt] = []
    for event in sorted(scenario.events, key=lambda e: e.date):
        try:
            if event.kind is EventKind.ENDOW:
                tx = Transaction(
                    postings=(
                        (ledger.FISCAL_TA, event.amount),
                        (ledger.FISCAL_TW, event.amount),
                    ),
                    label=f"endowment {event.amount}: {event.note}",
                )
                sector = ledger.post(sector, tx)
            elif event.kind is EventKind.NET_WORTH_HELICOPTER:
                sector = ledger.net_worth_helicopter(sector, event.amount)
            elif event.kind is EventKind.MONETARY_BASE_HELICOPTER:
                sector = ledger.monetary_base_helicopter(sector, event.amount)
            elif event.kind is EventKind.CLASSICAL_EXPANSION:
                sector = ledger.classical_fiscal_expansion(sector, event.amount)
            elif event.kind is EventKind.REVERSAL_BAILOUT:
                sector = ledger.reversal_bailout(sector, event.amount)
                schedule.append(
                    FundedDebt(
                        date=event.date,
                        principal=event.amount,
                        rate=event.rate,
                        note=event.note,
                    )
                )
            elif event.kind is EventKind.SET_AGIO_MODEL:
                model = market.fit(scenario.agio_observations)
            elif event.kind is EventKind.OBSERVE:
                pass
        except (LedgerError, DegenerateFit) as exc:
            raise type(exc)(
                f"{event.date.isoformat()} {event.kind.value}"
                f"{f' ({event.note})' if event.note else ''}: {exc}"
            ) from exc
        series.append(_snapshot(event.date, sector, model))
    return RunResult(
        series=tuple(series),
        funded_debt_schedule=tuple(schedule),
        final_sector=sector,
        agio_model=model,
    )


# --- series export -----------------------------------------------------------

SERIES_CSV_HEADER = (
    "date",
    "MB",
    "BW",
    "TW",
    "TB_fiscal",
    "consolidated_net_worth",
    "agio",
)


def series_csv(result: RunResult) -> str:
    """Snapshot series as CSV text (UTF-8, LF, '.' decimals)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_CSV_HEADER)
    for snap in result.series:
        writer.writerow(
            (
                snap.date.isoformat(),
                snap.mb,
                snap.bw,
                snap.tw,
                snap.tb_fiscal,
                snap.consolidated_net_worth,
                "" if snap.agio is None else repr(snap.agio),
            )
        )
    return buf.getvalue()


def export_csv(result: RunResult, path: str | Path) -> None:
    Path(path).write_text(series_csv(result), encoding="utf-8")


def annual_debt_service(schedule: tuple[FundedDebt, ...]) -> float:
    """Simple interest due per year on the funded debt created so far."""
    return sum(d.principal * d.rate for d in schedule if d.rate is not None)


# --- checkpoints ---------------------------------------------------------------


@dataclass(frozen=True)
class Checkpoint:
    """A documented money-stock level the replay must hit exactly."""

    label: str
    date: dt.date
    mb: int


@dataclass(frozen=True)
class CheckpointResult:
    checkpoint: Checkpoint
    actual_mb: int | None

    @property
    def passed(self) -> bool:
        return self.actual_mb == self.checkpoint.mb


def checkpoint_report(
    result: RunResult, checkpoints: tuple[Checkpoint, ...]
) -> list[CheckpointResult]:
    """Compare the last snapshot of each checkpoint date with its target."""
    report = []
    for checkpoint in checkpoints:
        actual = None
        for snap in result.series:
            if snap.date == checkpoint.date:
                actual = snap.mb
        report.append(CheckpointResult(checkpoint=checkpoint, actual_mb=actual))
    return report


# --- the built-in Venice 1629-31 timeline -------------------------------------

GIRO_FOUNDATION_RESERVES = 150_000
GIRO_FOUNDATION_BALANCES = 500_000
GIRO_PEAK_APRIL_1630 = 2_071_168
GIRO_PEAK_JUNE_1630 = 2_666_926
REFORM_TRANSFER_1630 = 716_652
REFORM_RESIDUAL_CONVERSION = (
    GIRO_PEAK_JUNE_1630 - REFORM_TRANSFER_1630 - 1_400_000
)  # 550,274
MINT_DEPOSIT_RATE = 0.07
LIFE_ANNUITY_RATE = 0.14

VENICE_CHECKPOINTS = (
    Checkpoint("Apr 1630 peak of famine issue", dt.date(1630, 4, 30), GIRO_PEAK_APRIL_1630),
    Checkpoint("Jun 1630 peak of plague issue", dt.date(1630, 6, 30), GIRO_PEAK_JUNE_1630),
    Checkpoint("end 1630 after reform", dt.date(1630, 12, 31), 1_400_000),
    Checkpoint("1638 stabilized level", dt.date(1638, 1, 1), 900_000),
)


def venice_1629_builtin() -> Scenario:
    """The Banco del Giro from foundation through the crisis and its reversal.

    Opening state, June 1619: 150,000 ducats of earmarked coin reserves
    against 500,000 of balances credited to the Republic's creditors; the
    uncovered remainder sits on the bank's net worth because the matching
    claim on the Treasury was never enforceable. Balance growth to the
    one-million pre-crisis level uses the documented authorizations where
    known and one reconstructed fill-in. The crisis issue, the reform of
    September 24, 1630, and the drawdown to the stable 900,000 level
    follow the documented balance readings; conversion amounts between
    documented readings are reconstructed residuals.
    """
    initial = (
        (ledger.MONETARY_BR, GIRO_FOUNDATION_RESERVES),
        (ledger.MONETARY_BW, GIRO_FOUNDATION_RESERVES - GIRO_FOUNDATION_BALANCES),
        (ledger.MONETARY_MB, GIRO_FOUNDATION_BALANCES),
    )
    events = (
        Event(
            dt.date(1620, 1, 15),
            EventKind.NET_WORTH_HELICOPTER,
            200_000,
            note="balances raised to 700,000; monthly Mint repayment flow set to 20,000",
        ),
        Event(
            dt.date(1621, 5, 15),
            EventKind.NET_WORTH_HELICOPTER,
            100_000,
            note="May 1621 authorization",
        ),
        Event(
            dt.date(1621, 6, 15),
            EventKind.NET_WORTH_HELICOPTER,
            40_000,
            note="June 1621 authorization",
        ),
        Event(
            dt.date(1625, 8, 15),
            EventKind.NET_WORTH_HELICOPTER,
            160_000,
            note="reconstructed fill-in to the pre-crisis level; monthly flow now 80,000",
        ),
        Event(
            dt.date(1629, 1, 15),
            EventKind.SET_AGIO_MODEL,
            note="calibrate premium curve to market observations",
        ),
        Event(
            dt.date(1630, 4, 30),
            EventKind.NET_WORTH_HELICOPTER,
            GIRO_PEAK_APRIL_1630 - 1_000_000,
            note="famine and war monetization to the documented April reading",
        ),
        Event(
            dt.date(1630, 6, 30),
            EventKind.NET_WORTH_HELICOPTER,
            GIRO_PEAK_JUNE_1630 - GIRO_PEAK_APRIL_1630,
            note="plague monetization to the documented June reading",
        ),
        Event(
            dt.date(1630, 9, 24),
            EventKind.REVERSAL_BAILOUT,
            REFORM_TRANSFER_1630,
            rate=MINT_DEPOSIT_RATE,
            note="reform: administration accounts moved to 7% Mint deposits",
        ),
        Event(
            dt.date(1630, 9, 24),
            EventKind.OBSERVE,
            rate=LIFE_ANNUITY_RATE,
            note="Mint life-annuity sales at 14% applied to strengthen the bank",
        ),
        Event(
            dt.date(1630, 12, 31),
            EventKind.REVERSAL_BAILOUT,
            REFORM_RESIDUAL_CONVERSION,
            rate=MINT_DEPOSIT_RATE,
            note="voluntary conversions into Mint deposits, reconstructed residual",
        ),
        Event(
            dt.date(1638, 1, 1),
            EventKind.REVERSAL_BAILOUT,
            500_000,
            rate=MINT_DEPOSIT_RATE,
            note="reconstructed drawdown to the stable level",
        ),
    )
    observations = (
        AgioObservation("1624", 840_000, 0.20),
        AgioObservation("early 1629", 1_000_000, 0.195),
        AgioObservation("1630 trough", GIRO_PEAK_JUNE_1630, -0.10),
    )
    return Scenario(
        params=ModelParams(eta=0.5, i=0.07, phi=0.14, eps=0.2, chi=0.4, p=1.0),
        start=dt.date(1619, 6, 1),
        initial=initial,
        events=events,
        agio_observations=observations,
    )


# --- scenario files ------------------------------------------------------------

_POSITION_BY_KEY = {p.key: p for p in ALL_POSITIONS}


def dumps(scenario: Scenario) -> str:
    """Serialize a scenario to the section format read by :func:`loads`."""
    lines = ["[params]"]
    for key in ("eta", "i", "phi", "eps", "chi", "p", "theta_bar"):
        lines.append(f"{key} = {getattr(scenario.params, key)!r}")
    lines.append("")
    lines.append("[initial]")
    lines.append(f"date = {scenario.start.isoformat()}")
    for position, amount in scenario.initial:
        lines.append(f"{position.key} = {amount}")
    lines.append("")
    lines.append("[events]")
    for event in scenario.events:
        parts = [event.date.isoformat(), event.kind.value]
        if event.amount is not None:
            parts.append(str(event.amount))
        if event.rate is not None:
            parts.append(f"rate={event.rate!r}")
        if event.note:
            parts.append(f'"{event.note}"')
        lines.append(" ".join(parts))
    lines.append("")
    lines.append("[agio]")
    for obs in scenario.agio_observations:
        lines.append(f'"{obs.label}" {obs.money_stock} {obs.agio!r}')
    lines.append("")
    return "\n".join(lines)


def save(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(dumps(scenario), encoding="utf-8")


def _parse_date(token: str, lineno: int) -> dt.date:
    try:
        return dt.date.fromisoformat(token)
    except ValueError:
        raise ParseError(f"bad date {token!r}", line=lineno)


def _parse_event(tokens: list[str], lineno: int) -> Event:
    if len(tokens) < 2:
        raise ParseError("event line needs at least a date and a kind", line=lineno)
    date = _parse_date(tokens[0], lineno)
    try:
        kind = EventKind(tokens[1])
    except ValueError:
        raise ParseError(f"unknown event kind {tokens[1]!r}", line=lineno)
    idx = 2
    amount = None
    if kind in AMOUNT_KINDS:
        if idx >= len(tokens):
            raise ParseError(f"{kind.value} needs an amount", line=lineno)
        try:
            amount = int(tokens[idx])
        except ValueError:
            raise ParseError(f"bad amount {tokens[idx]!r}", line=lineno)
        idx += 1
    rate = None
    if idx < len(tokens) and tokens[idx].startswith("rate="):
        try:
            rate = float(tokens[idx][len("rate="):])
        except ValueError:
            raise ParseError(f"bad rate {tokens[idx]!r}", line=lineno)
        idx += 1
    note = ""
    if idx < len(tokens):
        note = tokens[idx]
        idx += 1
    if idx != len(tokens):
        raise ParseError(f"unexpected trailing tokens {tokens[idx:]!r}", line=lineno)
    try:
        return Event(date=date, kind=kind, amount=amount, rate=rate, note=note)
    except ValidationError as exc:
        raise ValidationError(f"line {lineno}: {exc}") from exc


def loads(text: str) -> Scenario:
    """Parse the section format produced by :func:`dumps`."""
    section = None
    params_values: dict[str, float] = {}
    start: dt.date | None = None
    initial: list[tuple[Position, int]] = []
    events: list[Event] = []
    observations: list[AgioObservation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            if section not in ("params", "initial", "events", "agio"):
                raise ParseError(f"unknown section [{section}]", line=lineno)
            continue
        if section == "params":
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
            key, _, value = line.partition("=")
            key = key.strip()
            try:
                params_values[key] = float(value.strip())
            except ValueError:
                raise ParseError(f"bad number for {key!r}", line=lineno)
        elif section == "initial":
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "date":
                start = _parse_date(value, lineno)
            elif key in _POSITION_BY_KEY:
                try:
                    initial.append((_POSITION_BY_KEY[key], int(value)))
                except ValueError:
                    raise ParseError(f"bad amount {value!r}", line=lineno)
            else:
                raise ParseError(f"unknown opening position {key!r}", line=lineno)
        elif section == "events":
            try:
                tokens = shlex.split(line)
            except ValueError as exc:
                raise ParseError(f"unbalanced quotes: {exc}", line=lineno)
            events.append(_parse_event(tokens, lineno))
        elif section == "agio":
            try:
                tokens = shlex.split(line)
            except ValueError as exc:
                raise ParseError(f"unbalanced quotes: {exc}", line=lineno)
            if len(tokens) != 3:
                raise ParseError(
                    "expected: \"label\" money_stock agio", line=lineno
                )
            try:
                observations.append(
                    AgioObservation(
                        label=tokens[0],
                        money_stock=int(tokens[1]),
                        agio=float(tokens[2]),
                    )
                )
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno)
        else:
            raise ParseError(f"content outside any section: {line!r}", line=lineno)
    try:
        params = ModelParams(**params_values)
    except (TypeError, DomainError) as exc:
        raise ValidationError(f"bad parameter set: {exc}") from exc
    if start is None:
        raise ValidationError("the [initial] section must set a date")
    return Scenario(
        params=params,
        start=start,
        initial=tuple(initial),
        events=tuple(events),
        agio_observations=tuple(observations),
    )


def load(path: str | Path) -> Scenario:
    """Read and validate a scenario file."""
    return loads(Path(path).read_text(encoding="utf-8"))
