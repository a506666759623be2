"""Walk through the four funding strategies posting by posting.

Shows how the same 100,000-ducat stimulus lands on the two balance
sheets under each strategy, and why the net-worth variant followed by
its reversal leaves the loss with the Treasury instead of the bank.

Run: python demos/balance_sheet_strategies.py
"""

from giro_sim import ledger
from giro_sim.ledger import (
    FISCAL_TB,
    FISCAL_TW,
    MONETARY_BW,
    MONETARY_MB,
    MONETARY_TB,
    PublicSector,
)

X = 100_000


def describe(name, before, after):
    dtw = after.balance(FISCAL_TW) - before.balance(FISCAL_TW)
    dbw = after.balance(MONETARY_BW) - before.balance(MONETARY_BW)
    dmb = after.balance(MONETARY_MB) - before.balance(MONETARY_MB)
    print(f"{name:32s} dTW={dtw:+10d}  dBW={dbw:+10d}  dMB={dmb:+10d}")


def main():
    print(f"Each strategy moves {X:,} ducats.\n")

    # A private sector flush with bank money, so bond sales can settle.
    base = ledger.net_worth_helicopter(PublicSector.empty(), 5 * X)

    describe("classical fiscal expansion", base, ledger.classical_fiscal_expansion(base, X))
    describe("monetary-base helicopter", base, ledger.monetary_base_helicopter(base, X))
    describe("net-worth helicopter", base, ledger.net_worth_helicopter(base, X))
    describe("reversal bailout", base, ledger.reversal_bailout(base, X))

    print("\nNet-worth issue followed by its reversal:")
    issued = ledger.net_worth_helicopter(PublicSector.empty(), X)
    reversed_ = ledger.reversal_bailout(issued, X)
    print(f"  after issue:    BW={issued.balance(MONETARY_BW):+d}  TW={issued.balance(FISCAL_TW):+d}")
    print(f"  after reversal: BW={reversed_.balance(MONETARY_BW):+d}  TW={reversed_.balance(FISCAL_TW):+d}")
    print(f"  bonds now held by the private sector: "
          f"{reversed_.balance(FISCAL_TB) - reversed_.balance(MONETARY_TB):,}")
    print(f"  consolidated net worth: {ledger.consolidated_net_worth(reversed_):+,}"
          " (the loss moved, it did not disappear)")

    print("\nEvery posting, in order:")
    print(ledger.transaction_log_csv(reversed_))


if __name__ == "__main__":
    main()
