"""Ledger engine: posting rules, strategy signatures, conservation."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giro_sim import ledger
from giro_sim.errors import (
    DomainError,
    IllegalPosition,
    MirrorViolation,
    NegativeBalance,
    UnbalancedTransaction,
)
from giro_sim.ledger import (
    FISCAL_TA,
    FISCAL_TB,
    FISCAL_TD,
    FISCAL_TW,
    MONETARY_BR,
    MONETARY_BW,
    MONETARY_MB,
    MONETARY_TB,
    MONETARY_TD,
    Authority,
    Item,
    Position,
    PublicSector,
    Side,
    Transaction,
    consolidated_net_worth,
    post,
    replay,
)

amounts = st.integers(min_value=1, max_value=10**9)


def endowed(mb: int) -> PublicSector:
    """Sector whose private sector holds ``mb`` of bank money."""
    return ledger.net_worth_helicopter(PublicSector.empty(), mb)


class TestPositions:
    def test_the_eleven_legal_cells_construct(self):
        assert len(ledger.ALL_POSITIONS) == 11

    @pytest.mark.parametrize(
        "authority,item,side",
        [
            (Authority.FISCAL, Item.BR, Side.ASSET),
            (Authority.FISCAL, Item.TD, Side.LIABILITY),
            (Authority.MONETARY, Item.TA, Side.ASSET),
            (Authority.MONETARY, Item.TB, Side.LIABILITY),
            (Authority.MONETARY, Item.MB, Side.ASSET),
        ],
    )
    def test_combinations_off_the_sheets_are_rejected(self, authority, item, side):
        with pytest.raises(IllegalPosition):
            Position(authority, item, side)

    def test_snapshot_key(self):
        assert FISCAL_TD.key == "fiscal.assets.TD"
        assert MONETARY_MB.key == "monetary.liabilities.MB"


class TestPost:
    def test_identity_endowment(self):
        tx = Transaction(postings=((FISCAL_TA, 100), (FISCAL_TW, 100)), label="endow")
        sector = post(PublicSector.empty(), tx)
        assert sector.balance(FISCAL_TA) == 100
        assert sector.balance(FISCAL_TW) == 100
        sector.check_invariants()

    def test_single_leg_posting_is_unbalanced(self):
        tx = Transaction(postings=((FISCAL_TA, 100),))
        with pytest.raises(UnbalancedTransaction):
            post(PublicSector.empty(), tx)

    def test_coin_reserve_funding(self):
        # The 150,000 ducats of coin reserves earmarked for the bank at foundation.
        tx = Transaction(
            postings=((MONETARY_BR, 150_000), (MONETARY_MB, 150_000)),
            label="coin reserve funding",
        )
        sector = post(PublicSector.empty(), tx)
        assert sector.balance(MONETARY_BR) == 150_000
        assert sector.balance(MONETARY_MB) == 150_000
        sector.check_invariants()

    def test_mirror_violation_on_one_sided_td(self):
        tx = Transaction(postings=((FISCAL_TD, 50), (FISCAL_TW, 50)))
        with pytest.raises(MirrorViolation):
            post(PublicSector.empty(), tx)

    def test_non_net_worth_balance_may_not_go_negative(self):
        tx = Transaction(postings=((MONETARY_MB, -10), (MONETARY_BW, 10)))
        with pytest.raises(NegativeBalance):
            post(PublicSector.empty(), tx)

    def test_net_worths_may_go_negative(self):
        tx = Transaction(postings=((MONETARY_MB, 10), (MONETARY_BW, -10)))
        sector = post(PublicSector.empty(), tx)
        assert sector.balance(MONETARY_BW) == -10

    def test_history_is_append_only(self):
        tx = Transaction(postings=((FISCAL_TA, 1), (FISCAL_TW, 1)))
        base = PublicSector.empty()
        one = post(base, tx)
        two = post(one, tx)
        assert len(base.history) == 0
        assert len(one.history) == 1
        assert two.history[:1] == one.history

    def test_non_integer_delta_rejected(self):
        tx = Transaction(postings=((FISCAL_TA, 1.5), (FISCAL_TW, 1.5)))
        with pytest.raises(DomainError):
            post(PublicSector.empty(), tx)


class TestClassicalExpansion:
    def test_postings_forced_by_double_entry(self):
        sector = ledger.classical_fiscal_expansion(endowed(500), 100)
        assert sector.balance(FISCAL_TB) == 100
        assert sector.balance(FISCAL_TW) == -100
        assert sector.balance(MONETARY_MB) == 500
        assert sector.balance(MONETARY_TB) == 0

    def test_zero_is_a_no_op(self):
        sector = endowed(500)
        assert ledger.classical_fiscal_expansion(sector, 0) == sector

    def test_infeasible_intermediate(self):
        with pytest.raises(NegativeBalance):
            ledger.classical_fiscal_expansion(endowed(500), 600)


class TestMonetaryBaseHelicopter:
    def test_loss_lands_on_treasury_net_worth(self):
        sector = ledger.monetary_base_helicopter(PublicSector.empty(), 100)
        assert sector.balance(MONETARY_MB) == 100
        assert sector.balance(MONETARY_BW) == 0
        assert sector.balance(FISCAL_TW) == -100
        assert sector.balance(MONETARY_TB) == 100
        assert sector.balance(FISCAL_TB) == 100

    def test_zero_is_a_no_op(self):
        sector = PublicSector.empty()
        assert ledger.monetary_base_helicopter(sector, 0) == sector

    def test_two_halves_equal_one_whole(self):
        twice = ledger.monetary_base_helicopter(
            ledger.monetary_base_helicopter(PublicSector.empty(), 50), 50
        )
        once = ledger.monetary_base_helicopter(PublicSector.empty(), 100)
        assert twice.balances == once.balances


class TestNetWorthHelicopter:
    def test_venice_june_1630_issue(self):
        # 2,666,926 - 2,071,168: the documented April and June balance readings.
        sector = ledger.net_worth_helicopter(PublicSector.empty(), 2_071_168)
        sector = ledger.net_worth_helicopter(sector, 595_758)
        assert sector.balance(MONETARY_MB) == 2_666_926

    def test_only_the_bank_net_worth_is_debited(self):
        sector = ledger.net_worth_helicopter(PublicSector.empty(), 100)
        assert consolidated_net_worth(sector) == -100
        assert sector.balance(FISCAL_TW) == 0

    def test_reversal_relocates_the_loss(self):
        issued = ledger.net_worth_helicopter(PublicSector.empty(), 100)
        reversed_ = ledger.reversal_bailout(issued, 100)
        assert reversed_.balance(MONETARY_MB) == 0
        assert reversed_.balance(MONETARY_BW) == 0
        assert reversed_.balance(FISCAL_TW) == -100


class TestReversalBailout:
    def test_september_1630_reform_amount(self):
        sector = ledger.reversal_bailout(endowed(2_666_926), 716_652)
        assert sector.balance(MONETARY_MB) == 2_666_926 - 716_652
        assert sector.balance(MONETARY_BW) == -2_666_926 + 716_652
        assert sector.balance(FISCAL_TB) == 716_652

    def test_zero_is_a_no_op(self):
        sector = endowed(10)
        assert ledger.reversal_bailout(sector, 0) == sector

    def test_loss_is_relocated_not_erased(self):
        sector = ledger.reversal_bailout(endowed(100), 100)
        assert consolidated_net_worth(sector) == -100

    def test_requires_enough_bank_money(self):
        with pytest.raises(NegativeBalance):
            ledger.reversal_bailout(endowed(50), 60)


class TestStrategySignatures:
    """Net (dTW, dBW, dMB) of each strategy, exact for arbitrary sizes."""

    @given(x=amounts)
    def test_monetary_base_helicopter(self, x):
        sector = ledger.monetary_base_helicopter(PublicSector.empty(), x)
        assert (
            sector.balance(FISCAL_TW),
            sector.balance(MONETARY_BW),
            sector.balance(MONETARY_MB),
        ) == (-x, 0, x)

    @given(x=amounts)
    def test_net_worth_helicopter(self, x):
        sector = ledger.net_worth_helicopter(PublicSector.empty(), x)
        assert (
            sector.balance(FISCAL_TW),
            sector.balance(MONETARY_BW),
            sector.balance(MONETARY_MB),
        ) == (0, -x, x)

    @given(x=amounts)
    def test_reversal_bailout(self, x):
        base = endowed(x)
        sector = ledger.reversal_bailout(base, x)
        deltas = (
            sector.balance(FISCAL_TW) - base.balance(FISCAL_TW),
            sector.balance(MONETARY_BW) - base.balance(MONETARY_BW),
            sector.balance(MONETARY_MB) - base.balance(MONETARY_MB),
        )
        assert deltas == (-x, x, -x)

    @given(x=amounts)
    def test_classical_expansion(self, x):
        base = endowed(x)
        sector = ledger.classical_fiscal_expansion(base, x)
        deltas = (
            sector.balance(FISCAL_TW) - base.balance(FISCAL_TW),
            sector.balance(MONETARY_BW) - base.balance(MONETARY_BW),
            sector.balance(MONETARY_MB) - base.balance(MONETARY_MB),
        )
        assert deltas == (-x, 0, 0)

    @given(x=amounts, y=amounts)
    @settings(max_examples=50)
    def test_additivity(self, x, y):
        split = ledger.net_worth_helicopter(
            ledger.net_worth_helicopter(PublicSector.empty(), x), y
        )
        joint = ledger.net_worth_helicopter(PublicSector.empty(), x + y)
        assert split.balances == joint.balances


@st.composite
def operation_sequences(draw):
    ops = draw(
        st.lists(
            st.tuples(st.sampled_from("mbh nwh rev cls".split()), amounts),
            min_size=1,
            max_size=8,
        )
    )
    return ops


class TestConservation:
    @given(ops=operation_sequences())
    @settings(max_examples=300, deadline=None)
    def test_sheets_balance_after_any_sequence(self, ops):
        sector = PublicSector.empty()
        for name, x in ops:
            if name == "mbh":
                sector = ledger.monetary_base_helicopter(sector, x)
            elif name == "nwh":
                sector = ledger.net_worth_helicopter(sector, x)
            elif name == "rev":
                x = min(x, sector.balance(MONETARY_MB))
                sector = ledger.reversal_bailout(sector, x)
            else:
                x = min(x, sector.balance(MONETARY_MB))
                sector = ledger.classical_fiscal_expansion(sector, x)
            sector.check_invariants()
        # Net worth moved only by explicit net-worth postings.
        posted = sum(
            delta
            for tx in sector.history
            for position, delta in tx.postings
            if position in ledger.NET_WORTH_POSITIONS
        )
        assert consolidated_net_worth(sector) == posted

    @given(ops=operation_sequences())
    @settings(max_examples=100, deadline=None)
    def test_replaying_the_history_reproduces_the_state(self, ops):
        sector = PublicSector.empty()
        for name, x in ops:
            if name == "nwh":
                sector = ledger.net_worth_helicopter(sector, x)
            else:
                sector = ledger.monetary_base_helicopter(sector, x)
        rebuilt = replay(sector.history)
        assert rebuilt == sector


class TestExports:
    def test_transaction_log_lists_every_posting(self):
        sector = ledger.net_worth_helicopter(PublicSector.empty(), 5)
        text = ledger.transaction_log_csv(sector)
        lines = text.splitlines()
        assert lines[0] == "seq,label,authority,item,side,delta"
        assert len(lines) == 3  # header + two postings
        assert lines[1].startswith("1,")
        assert ",monetary,MB,liability,5" in lines[1]

    def test_balances_snapshot_covers_all_cells(self):
        import json

        sector = ledger.monetary_base_helicopter(PublicSector.empty(), 7)
        snapshot = json.loads(ledger.balances_snapshot_json(sector))
        assert len(snapshot) == 11
        assert snapshot["monetary.liabilities.MB"] == 7
        assert snapshot["fiscal.liabilities.TW"] == -7
