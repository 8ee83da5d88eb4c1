"""Per-round payoffs for the plain and reputation-scaled business games.

With goods value ``V`` the plain game pays T=2V, R=P=V, S=-V. The
pro-incentive game keeps T and S but adds each player's own reputation
as a bonus on mutual cooperation and a penalty on mutual defection:
R = V + theta*V, P = V - theta*V.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ContractViolation
from .genome import Move


class Scheme(str, enum.Enum):
    NON_INCENTIVE = "non_incentive"
    PRO_INCENTIVE = "pro_incentive"

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ContractViolation(f"unknown scheme {text!r}; expected one of {names}") from None


@dataclass(frozen=True)
class PayoffParams:
    scheme: Scheme = Scheme.NON_INCENTIVE
    goods_value: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not self.goods_value > 0:
            raise ContractViolation(f"goods_value must be > 0, got {self.goods_value}")

    @property
    def pro_incentive(self):
        return self.scheme is Scheme.PRO_INCENTIVE


@dataclass(frozen=True)
class RoundPayoffs:
    payoff_a: float
    payoff_b: float

    def swapped(self):
        return RoundPayoffs(self.payoff_b, self.payoff_a)


def _check_theta(theta):
    if not 0.0 <= theta <= 1.0:
        raise ContractViolation(f"reputation must be in [0, 1], got {theta}")


def round_payoffs(params, move_a, move_b, theta_a=1.0, theta_b=1.0):
    _check_theta(theta_a)
    _check_theta(theta_b)
    v = params.goods_value
    a, b = Move(move_a), Move(move_b)
    if a is not b:
        # temptation / sucker are scheme-independent
        if a is Move.DEFECT:
            return RoundPayoffs(2.0 * v, -v)
        return RoundPayoffs(-v, 2.0 * v)
    if not params.pro_incentive:
        return RoundPayoffs(v, v)
    if a is Move.COOPERATE:
        return RoundPayoffs(v + theta_a * v, v + theta_b * v)
    return RoundPayoffs(v - theta_a * v, v - theta_b * v)


def payoff_table(params, theta=1.0):
    """T, R, P, S for a player with reputation ``theta``."""
    r = round_payoffs(params, Move.COOPERATE, Move.COOPERATE, theta, theta).payoff_a
    p = round_payoffs(params, Move.DEFECT, Move.DEFECT, theta, theta).payoff_a
    t, s = round_payoffs(params, Move.DEFECT, Move.COOPERATE, theta, theta).payoff_a, -params.goods_value
    return {"T": t, "R": r, "P": p, "S": s}
