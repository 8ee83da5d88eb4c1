import pytest
from hypothesis import given
from hypothesis import strategies as st

from coopgame.errors import ContractViolation
from coopgame.genome import Move
from coopgame.reputation import EMPTY, MAX_COUNT, TransactionHistory, expected_cooperation, record


def test_record():
    assert record(EMPTY, Move.COOPERATE) == TransactionHistory(1, 0)
    assert record(TransactionHistory(4745, 9), Move.COOPERATE) == TransactionHistory(4746, 9)
    assert record(TransactionHistory(3, 7), Move.DEFECT) == TransactionHistory(3, 8)


def test_theta_examples():
    assert expected_cooperation(TransactionHistory(4746, 9)) == 4746 / 4755
    assert round(100 * expected_cooperation(TransactionHistory(4746, 9)), 1) == 99.8
    assert expected_cooperation(EMPTY) == 1.0
    assert expected_cooperation(TransactionHistory(0, 10)) == 0.0


def test_negative_counts_rejected():
    with pytest.raises(ContractViolation):
        TransactionHistory(-1, 0)


def test_overflow_rejected():
    with pytest.raises(ContractViolation):
        record(TransactionHistory(MAX_COUNT, 0), Move.COOPERATE)


moves = st.lists(st.sampled_from(list(Move)), max_size=60)


@given(moves)
def test_theta_bounded(ms):
    h = EMPTY
    for m in ms:
        h = record(h, m)
        assert 0.0 <= expected_cooperation(h) <= 1.0


@given(st.integers(1, 200))
def test_pure_runs(n):
    c = d = EMPTY
    for _ in range(n):
        c = record(c, Move.COOPERATE)
        d = record(d, Move.DEFECT)
    assert expected_cooperation(c) == 1.0
    assert expected_cooperation(d) == 0.0


@given(moves, st.randoms())
def test_record_order_independent(ms, rnd):
    shuffled = list(ms)
    rnd.shuffle(shuffled)
    a = b = EMPTY
    for m in ms:
        a = record(a, m)
    for m in shuffled:
        b = record(b, m)
    assert a == b
