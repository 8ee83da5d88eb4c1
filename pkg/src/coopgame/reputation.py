"""Per-player cooperation/defection ledger and the reputation score derived from it."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .genome import Move

# ledgers are stored as int64 in the compiled kernel
MAX_COUNT = 2**63 - 1


@dataclass(frozen=True)
class TransactionHistory:
    coop_count: int = 0
    defect_count: int = 0

    def __post_init__(self):
        if self.coop_count < 0 or self.defect_count < 0:
            raise ContractViolation("ledger counts must be non-negative")
        if self.coop_count + self.defect_count > MAX_COUNT:
            raise ContractViolation("ledger total exceeds int64 range")

    @property
    def total(self):
        return self.coop_count + self.defect_count

    @property
    def theta(self):
        return expected_cooperation(self)


EMPTY = TransactionHistory()


def record(history, move):
    if history.total >= MAX_COUNT:
        raise ContractViolation("ledger counter overflow")
    if Move(move) is Move.COOPERATE:
        return TransactionHistory(history.coop_count + 1, history.defect_count)
    return TransactionHistory(history.coop_count, history.defect_count + 1)


def theta_from_counts(coop, defect):
    """Share of cooperative moves; an empty record counts as fully trustworthy."""
    total = coop + defect
    if total == 0:
        return 1.0
    return coop / total


def expected_cooperation(history):
    return theta_from_counts(history.coop_count, history.defect_count)
