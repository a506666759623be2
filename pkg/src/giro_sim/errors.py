"""Exception types shared across the package.

Grouped by the layer that raises them; the CLI maps them onto exit codes
(2 = parse/usage, 3 = domain/infeasibility, 4 = data validation).
"""


class GiroSimError(Exception):
    """Base class for all package errors."""


class DomainError(GiroSimError):
    """An argument is outside the domain an operation is defined on."""


# --- ledger ---------------------------------------------------------------

class LedgerError(GiroSimError):
    """Base class for accounting violations."""


class IllegalPosition(LedgerError):
    """(authority, item, side) combination not present on the stylized sheets."""


class UnbalancedTransaction(LedgerError):
    """Asset and liability deltas differ for some authority."""


class MirrorViolation(LedgerError):
    """A mirrored inter-authority item was posted on one side only."""


class NegativeBalance(LedgerError):
    """A non-net-worth balance would drop below zero."""


# --- policy model ---------------------------------------------------------

class Infeasible(GiroSimError):
    """The budget constraint has no tax rate that raises the required revenue."""


class NoFeasiblePolicy(GiroSimError):
    """Every candidate policy on the search grid is infeasible."""


# --- population -----------------------------------------------------------

class EmptyPopulation(GiroSimError):
    """Operation requires at least one inhabitant."""


class NoCondorcetWinner(GiroSimError):
    """No grid candidate wins every pairwise majority contest."""


# --- market ---------------------------------------------------------------

class DegenerateFit(GiroSimError):
    """Observations do not identify the premium curve (fewer than two distinct money stocks)."""


# --- file I/O -------------------------------------------------------------

class ParseError(GiroSimError):
    """Malformed input file. Carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GiroSimError):
    """Input parsed but violates a semantic requirement."""
