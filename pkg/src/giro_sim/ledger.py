"""Double-entry engine for a two-authority public sector.

The public sector is split into a fiscal authority (the Treasury) and a
monetary authority (the bank of issue). Each keeps a stylized balance
sheet with a fixed set of positions:

    Fiscal assets       TD  deposits with the bank of issue
                        TA  other Treasury assets
    Fiscal liabilities  TW  Treasury net worth
                        TB  marketable bonds outstanding
                        TL  direct (unmarketable) borrowing from the bank
    Monetary assets     TB  marketable bonds held by the bank
                        BR  bullion and coin reserves
                        TL  direct loans to the Treasury
    Monetary liabilities BW  bank net worth
                        TD  Treasury deposits
                        MB  monetary base (private-sector deposits)

TD and TL appear on both sheets and must move in lockstep; TB need not,
because part of the bond stock sits with the private sector. Privately
held bonds are therefore the derived quantity fiscal TB minus monetary TB,
and the monetary base MB stands for all private claims on the bank.

``PublicSector`` is a value: every operation returns a new instance and
never mutates its input, so independent simulations can share nothing.
Amounts are integer ducats throughout; only the two net-worth positions
(TW, BW) may go negative.

The module also provides the four composite funding strategies the engine
is built to compare: a classical bond-financed expansion, money-financed
stimulus in its monetary-base and net-worth variants, and the bailout
that reverses the net-worth variant by converting sight money into funded
debt. Each is a sequence of balanced transactions applied atomically.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import (
    DomainError,
    IllegalPosition,
    MirrorViolation,
    NegativeBalance,
    UnbalancedTransaction,
)


class Authority(Enum):
    FISCAL = "fiscal"
    MONETARY = "monetary"


class Side(Enum):
    ASSET = "asset"
    LIABILITY = "liability"


class Item(Enum):
    TD = "TD"
    TA = "TA"
    TW = "TW"
    TB = "TB"
    TL = "TL"
    BR = "BR"
    BW = "BW"
    MB = "MB"


# The only (authority, item, side) cells that exist on the stylized sheets.
_LEGAL_CELLS = frozenset(
    {
        (Authority.FISCAL, Item.TD, Side.ASSET),
        (Authority.FISCAL, Item.TA, Side.ASSET),
        (Authority.FISCAL, Item.TW, Side.LIABILITY),
        (Authority.FISCAL, Item.TB, Side.LIABILITY),
        (Authority.FISCAL, Item.TL, Side.LIABILITY),
        (Authority.MONETARY, Item.TB, Side.ASSET),
        (Authority.MONETARY, Item.BR, Side.ASSET),
        (Authority.MONETARY, Item.TL, Side.ASSET),
        (Authority.MONETARY, Item.BW, Side.LIABILITY),
        (Authority.MONETARY, Item.TD, Side.LIABILITY),
        (Authority.MONETARY, Item.MB, Side.LIABILITY),
    }
)


@dataclass(frozen=True)
class Position:
    """One cell of the stylized balance sheets.

    Raises IllegalPosition for any (authority, item, side) combination
    that does not exist on the sheets.
    """

    authority: Authority
    item: Item
    side: Side

    def __post_init__(self):
        if (self.authority, self.item, self.side) not in _LEGAL_CELLS:
            raise IllegalPosition(
                f"no {self.side.value} position {self.item.value} on the "
                f"{self.authority.value} balance sheet"
            )

    @property
    def key(self) -> str:
        """Dotted snapshot key, e.g. ``fiscal.assets.TD``."""
        plural = "assets" if self.side is Side.ASSET else "liabilities"
        return f"{self.authority.value}.{plural}.{self.item.value}"


FISCAL_TD = Position(Authority.FISCAL, Item.TD, Side.ASSET)
FISCAL_TA = Position(Authority.FISCAL, Item.TA, Side.ASSET)
FISCAL_TW = Position(Authority.FISCAL, Item.TW, Side.LIABILITY)
FISCAL_TB = Position(Authority.FISCAL, Item.TB, Side.LIABILITY)
FISCAL_TL = Position(Authority.FISCAL, Item.TL, Side.LIABILITY)
MONETARY_TB = Position(Authority.MONETARY, Item.TB, Side.ASSET)
MONETARY_BR = Position(Authority.MONETARY, Item.BR, Side.ASSET)
MONETARY_TL = Position(Authority.MONETARY, Item.TL, Side.ASSET)
MONETARY_BW = Position(Authority.MONETARY, Item.BW, Side.LIABILITY)
MONETARY_TD = Position(Authority.MONETARY, Item.TD, Side.LIABILITY)
MONETARY_MB = Position(Authority.MONETARY, Item.MB, Side.LIABILITY)

ALL_POSITIONS = (
    FISCAL_TD,
    FISCAL_TA,
    FISCAL_TW,
    FISCAL_TB,
    FISCAL_TL,
    MONETARY_TB,
    MONETARY_BR,
    MONETARY_TL,
    MONETARY_BW,
    MONETARY_TD,
    MONETARY_MB,
)

#: Positions allowed to carry a negative balance.
NET_WORTH_POSITIONS = frozenset({FISCAL_TW, MONETARY_BW})

#: Inter-authority items that must move in lockstep within a transaction.
_MIRROR_PAIRS = ((FISCAL_TD, MONETARY_TD), (FISCAL_TL, MONETARY_TL))


def _check_amount(amount, *, allow_zero: bool = False) -> int:
    if isinstance(amount, bool) or not isinstance(amount, int):
        raise DomainError(f"amounts are integer ducats, got {amount!r}")
    if amount < 0 or (amount == 0 and not allow_zero):
        raise DomainError(f"amount must be positive, got {amount}")
    return amount


@dataclass(frozen=True)
class Transaction:
    """A labeled set of signed postings applied as one unit.

    Postings are (position, delta) pairs; deltas are signed integer
    ducats. Validity (per-authority balance and mirror identities) is
    checked by :func:`post`, or explicitly via :meth:`validate`.
    """

    postings: tuple[tuple[Position, int], ...]
    label: str = ""

    def validate(self) -> None:
        """Raise unless the transaction preserves both balance sheets."""
        sums: dict[tuple[Authority, Side], int] = {}
        for position, delta in self.postings:
            if isinstance(delta, bool) or not isinstance(delta, int):
                raise DomainError(f"posting deltas are integer ducats, got {delta!r}")
            key = (position.authority, position.side)
            sums[key] = sums.get(key, 0) + delta
        for authority in Authority:
            assets = sums.get((authority, Side.ASSET), 0)
            liabilities = sums.get((authority, Side.LIABILITY), 0)
            if assets != liabilities:
                raise UnbalancedTransaction(
                    f"{self.label or 'transaction'}: {authority.value} asset delta "
                    f"{assets} != liability delta {liabilities}"
                )
        for fiscal_pos, monetary_pos in _MIRROR_PAIRS:
            fiscal_delta = sum(d for p, d in self.postings if p == fiscal_pos)
            monetary_delta = sum(d for p, d in self.postings if p == monetary_pos)
            if fiscal_delta != monetary_delta:
                raise MirrorViolation(
                    f"{self.label or 'transaction'}: {fiscal_pos.item.value} moved by "
                    f"{fiscal_delta} on the fiscal sheet but {monetary_delta} on the "
                    f"monetary sheet"
                )


@dataclass(frozen=True)
class PublicSector:
    """Immutable joint state of the two balance sheets plus its audit trail."""

    balances: dict[Position, int]
    history: tuple[Transaction, ...] = ()

    @classmethod
    def empty(cls) -> "PublicSector":
        return cls(balances={p: 0 for p in ALL_POSITIONS})

    def balance(self, position: Position) -> int:
        return self.balances[position]

    def total(self, authority: Authority, side: Side) -> int:
        return sum(
            amount
            for position, amount in self.balances.items()
            if position.authority is authority and position.side is side
        )

    def check_invariants(self) -> None:
        """Raise if any standing balance-sheet identity is broken."""
        for authority in Authority:
            assets = self.total(authority, Side.ASSET)
            liabilities = self.total(authority, Side.LIABILITY)
            if assets != liabilities:
                raise UnbalancedTransaction(
                    f"{authority.value} sheet off balance: assets {assets}, "
                    f"liabilities {liabilities}"
                )
        for fiscal_pos, monetary_pos in _MIRROR_PAIRS:
            if self.balances[fiscal_pos] != self.balances[monetary_pos]:
                raise MirrorViolation(
                    f"{fiscal_pos.item.value} mirror broken: fiscal "
                    f"{self.balances[fiscal_pos]}, monetary {self.balances[monetary_pos]}"
                )


def post(sector: PublicSector, tx: Transaction) -> PublicSector:
    """Apply one balanced transaction, returning the new sector state.

    The transaction must balance each authority's sheet separately and
    keep the TD/TL mirrors aligned. Every resulting balance other than
    the two net worths must stay non-negative.
    """
    tx.validate()
    balances = dict(sector.balances)
    for position, delta in tx.postings:
        balances[position] = balances[position] + delta
    for position, amount in balances.items():
        if amount < 0 and position not in NET_WORTH_POSITIONS:
            raise NegativeBalance(
                f"{tx.label or 'transaction'}: {position.key} would fall to {amount}"
            )
    return PublicSector(balances=balances, history=sector.history + (tx,))


def replay(history: Iterable[Transaction]) -> PublicSector:
    """Rebuild a sector by re-posting a transaction history from scratch."""
    sector = PublicSector.empty()
    for tx in history:
        sector = post(sector, tx)
    return sector


def consolidated_net_worth(sector: PublicSector) -> int:
    """TW + BW: where money-financed losses live, whoever carries them."""
    return sector.balance(FISCAL_TW) + sector.balance(MONETARY_BW)


# --- composite funding strategies ------------------------------------------


def classical_fiscal_expansion(sector: PublicSector, amount: int) -> PublicSector:
    """Bond-financed spending: sell bonds to the private sector, spend the cash.

    Leg 1 places bonds with the private sector, which pays in bank money
    (MB falls, Treasury deposits rise). Leg 2 spends the deposits, putting
    the money back in circulation. Net effect: fiscal TB +x, TW -x, and a
    completely untouched monetary authority. Requires MB >= x so the
    private sector can pay for the bonds.
    """
    if _check_amount(amount, allow_zero=True) == 0:
        return sector
    sale = Transaction(
        postings=(
            (FISCAL_TD, amount),
            (FISCAL_TB, amount),
            (MONETARY_MB, -amount),
            (MONETARY_TD, amount),
        ),
        label=f"classical expansion {amount}: bond sale to private sector",
    )
    spending = Transaction(
        postings=(
            (FISCAL_TD, -amount),
            (FISCAL_TW, -amount),
            (MONETARY_TD, -amount),
            (MONETARY_MB, amount),
        ),
        label=f"classical expansion {amount}: spending",
    )
    return post(post(sector, sale), spending)


def monetary_base_helicopter(sector: PublicSector, amount: int) -> PublicSector:
    """Money-financed stimulus via bond monetization.

    Step 1: the Treasury issues bonds and the bank buys them all,
    crediting the Treasury's deposit account. Step 2: the Treasury spends
    the deposits, so the money ends up with the private sector. The loss
    lands on the Treasury's net worth; the bank's net worth is untouched
    and its balance sheet grows on both sides.

    Net deltas: (TW, BW, MB) -> (-x, 0, +x), fiscal and monetary TB +x.
    """
    if _check_amount(amount, allow_zero=True) == 0:
        return sector
    monetization = Transaction(
        postings=(
            (FISCAL_TD, amount),
            (FISCAL_TB, amount),
            (MONETARY_TB, amount),
            (MONETARY_TD, amount),
        ),
        label=f"monetary-base helicopter {amount}: bonds bought by the bank",
    )
    spending = Transaction(
        postings=(
            (FISCAL_TD, -amount),
            (FISCAL_TW, -amount),
            (MONETARY_TD, -amount),
            (MONETARY_MB, amount),
        ),
        label=f"monetary-base helicopter {amount}: spending",
    )
    return post(post(sector, monetization), spending)


def net_worth_helicopter(sector: PublicSector, amount: int) -> PublicSector:
    """Money-financed stimulus with no asset behind it.

    The bank credits private accounts on the Treasury's instruction. The
    matching direct loan to the Treasury is never booked because it does
    not exist in any enforceable sense, so the issue is carried entirely
    by the bank's net worth, which may go negative.

    Net deltas: (TW, BW, MB) -> (0, -x, +x). The fiscal sheet never moves.
    """
    if _check_amount(amount, allow_zero=True) == 0:
        return sector
    issue = Transaction(
        postings=((MONETARY_MB, amount), (MONETARY_BW, -amount)),
        label=f"net-worth helicopter {amount}: unbacked issue",
    )
    return post(sector, issue)


def reversal_bailout(sector: PublicSector, amount: int) -> PublicSector:
    """Undo a net-worth issue by converting sight money into funded debt.

    Leg 1: the Treasury issues bonds to the private sector, paid for in
    bank money, which drains MB. Leg 2: the proceeds are handed to the
    bank as a gratuitous transfer, rebuilding its net worth. The earlier
    loss is not erased, it moves from the bank's net worth to the
    Treasury's. Requires MB >= x.

    Net deltas: (TW, BW, MB) -> (-x, +x, -x), fiscal TB +x.
    """
    if _check_amount(amount, allow_zero=True) == 0:
        return sector
    funding = Transaction(
        postings=(
            (FISCAL_TD, amount),
            (FISCAL_TB, amount),
            (MONETARY_MB, -amount),
            (MONETARY_TD, amount),
        ),
        label=f"reversal bailout {amount}: bond issue drains bank money",
    )
    transfer = Transaction(
        postings=(
            (FISCAL_TD, -amount),
            (FISCAL_TW, -amount),
            (MONETARY_TD, -amount),
            (MONETARY_BW, amount),
        ),
        label=f"reversal bailout {amount}: gratuitous transfer to the bank",
    )
    return post(post(sector, funding), transfer)


# --- exports ----------------------------------------------------------------

TRANSACTION_LOG_HEADER = ("seq", "label", "authority", "item", "side", "delta")


def transaction_log_csv(sector: PublicSector) -> str:
    """Audit trail as CSV, one row per posting, transactions numbered from 1."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRANSACTION_LOG_HEADER)
    for seq, tx in enumerate(sector.history, start=1):
        for position, delta in tx.postings:
            writer.writerow(
                (
                    seq,
                    tx.label,
                    position.authority.value,
                    position.item.value,
                    position.side.value,
                    delta,
                )
            )
    return buf.getvalue()


def balances_snapshot_json(sector: PublicSector) -> str:
    """All eleven balances as a JSON object keyed ``fiscal.assets.TD`` etc."""
    snapshot = {p.key: sector.balances[p] for p in ALL_POSITIONS}
    return json.dumps(snapshot, indent=2, sort_keys=True)
