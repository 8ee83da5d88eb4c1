"""Iterated match between two chromosomes with live reputation.

This is the object-level engine; the grid evaluation uses the array
kernels in :mod:`coopgame.backend`, which must agree with it exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .genome import MatchContext, Move, decode_move, outcome_code
from .payoff import round_payoffs
from .reputation import expected_cooperation, record


@dataclass(frozen=True)
class MatchResult:
    total_a: float
    total_b: float
    coop_moves_a: int
    coop_moves_b: int
    rounds_played: int


@dataclass(frozen=True)
class RoundTrace:
    round: int
    move_a: Move
    move_b: Move
    theta_a: float
    theta_b: float
    payoff_a: float
    payoff_b: float


def _context(t, opp_moves, outcomes):
    return MatchContext(
        round_number=t,
        opponent_opening=tuple(opp_moves[:2]),
        recent_outcomes=tuple(outcomes[-3:]),
    )


def play_match(genome_a, genome_b, ledger_a, ledger_b, rounds, params, trace=None):
    """Play ``rounds`` simultaneous-move rounds.

    Each round reads both reputations, pays out, and only then records the
    two moves, so a move never affects its own round's payoff. Returns
    ``(result, ledger_a, ledger_b)``. If ``trace`` is a list, one
    :class:`RoundTrace` per round is appended to it.
    """
    if rounds < 1:
        raise ContractViolation(f"rounds must be >= 1, got {rounds}")
    moves_a, moves_b = [], []
    outcomes_a, outcomes_b = [], []
    total_a = total_b = 0.0
    coop_a = coop_b = 0
    for t in range(1, rounds + 1):
        ma = decode_move(genome_a, _context(t, moves_b, outcomes_a))
        mb = decode_move(genome_b, _context(t, moves_a, outcomes_b))
        theta_a = expected_cooperation(ledger_a)
        theta_b = expected_cooperation(ledger_b)
        pay = round_payoffs(params, ma, mb, theta_a, theta_b)
        total_a += pay.payoff_a
        total_b += pay.payoff_b
        ledger_a = record(ledger_a, ma)
        ledger_b = record(ledger_b, mb)
        coop_a += ma is Move.COOPERATE
        coop_b += mb is Move.COOPERATE
        if len(moves_a) < 2:
            moves_a.append(ma)
            moves_b.append(mb)
        outcomes_a = (outcomes_a + [outcome_code(ma, mb)])[-3:]
        outcomes_b = (outcomes_b + [outcome_code(mb, ma)])[-3:]
        if trace is not None:
            trace.append(RoundTrace(t, ma, mb, theta_a, theta_b, pay.payoff_a, pay.payoff_b))
    return MatchResult(total_a, total_b, coop_a, coop_b, rounds), ledger_a, ledger_b
