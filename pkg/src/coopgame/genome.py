"""Memory-3 strategy chromosome.

A chromosome holds 71 move bits. Bits 0-63 form a lookup table indexed by
the last three joint outcomes (oldest outcome most significant); bits
64-70 drive the first three rounds, keyed only on what the opponent has
played so far:

    round 1   bit 64
    round 2   bit 65 + opp1
    round 3   bit 67 + 2*opp1 + opp2

Bit value 0 is Cooperate, 1 is Defect, so the all-zero genome is AllC.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

GENOME_LENGTH = 71
TABLE_SIZE = 64
OPENING_OFFSET = 64
ROUND2_OFFSET = 65
ROUND3_OFFSET = 67
MIN_LOCUS = 1
MAX_LOCUS = GENOME_LENGTH - 1


class Move(enum.IntEnum):
    COOPERATE = 0
    DEFECT = 1

    @property
    def symbol(self):
        return "C" if self is Move.COOPERATE else "D"


C = Move.COOPERATE
D = Move.DEFECT


def outcome_code(own, opponent):
    """Joint outcome of one round seen from ``own``'s side: CC=0, CD=1, DC=2, DD=3."""
    return 2 * int(own) + int(opponent)


def outcome_moves(code):
    if not 0 <= code <= 3:
        raise ContractViolation(f"joint outcome code must be in [0, 3], got {code}")
    return Move(code >> 1), Move(code & 1)


def history_index(o1, o2, o3):
    """Lookup-table slot for outcomes ``o1`` (oldest) .. ``o3`` (newest)."""
    return 16 * o1 + 4 * o2 + o3


class PlayerClass(enum.IntEnum):
    """Cooperativeness class; integer order runs least to most cooperative."""

    VERY_DISHONEST = 0
    DISHONEST = 1
    OKAY = 2
    GOOD = 3
    COOPERATIVE = 4
    VERY_COOPERATIVE = 5

    @property
    def label(self):
        return self.name.lower()


@dataclass(frozen=True)
class Chromosome:
    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != GENOME_LENGTH:
            raise ContractViolation(f"chromosome needs {GENOME_LENGTH} bits, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ContractViolation("chromosome bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        if len(text) != GENOME_LENGTH or set(text) - {"0", "1"}:
            raise ContractViolation(
                f"genome string must be {GENOME_LENGTH} characters of '0'/'1'"
            )
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_array(cls, arr):
        return cls(tuple(int(b) for b in np.asarray(arr).ravel()))

    @classmethod
    def all_cooperate(cls):
        return cls((0,) * GENOME_LENGTH)

    @classmethod
    def all_defect(cls):
        return cls((1,) * GENOME_LENGTH)

    def to_string(self):
        return "".join(str(b) for b in self.bits)

    def to_array(self):
        return np.array(self.bits, dtype=np.uint8)

    @property
    def main_table(self):
        return self.bits[:TABLE_SIZE]

    @property
    def opening_bits(self):
        return self.bits[OPENING_OFFSET:]

    def __len__(self):
        return GENOME_LENGTH

    def __getitem__(self, i):
        return self.bits[i]

    def __str__(self):
        return self.to_string()


@dataclass(frozen=True)
class MatchContext:
    """What a player knows when choosing its move in ``round_number``.

    ``opponent_opening`` holds the opponent's moves in rounds 1 and 2 (as
    far as they have been played); ``recent_outcomes`` holds the last up to
    three joint-outcome codes from this player's side, oldest first.
    """

    round_number: int
    opponent_opening: tuple = ()
    recent_outcomes: tuple = ()

    def validate(self):
        n = self.round_number
        if n < 1:
            raise ContractViolation(f"round_number must be >= 1, got {n}")
        if len(self.opponent_opening) != min(n - 1, 2):
            raise ContractViolation(
                f"round {n} needs {min(n - 1, 2)} opponent opening moves, "
                f"got {len(self.opponent_opening)}"
            )
        if len(self.recent_outcomes) != min(n - 1, 3):
            raise ContractViolation(
                f"round {n} needs {min(n - 1, 3)} recent outcomes, "
                f"got {len(self.recent_outcomes)}"
            )
        if any(int(m) not in (0, 1) for m in self.opponent_opening):
            raise ContractViolation("opponent opening moves must be 0 or 1")
        if any(not 0 <= int(o) <= 3 for o in self.recent_outcomes):
            raise ContractViolation("outcome codes must be in [0, 3]")


def random_genome(rng):
    """Draw a uniform random chromosome; consumes one ``integers`` call of 71 bits."""
    return Chromosome.from_array(rng.integers(0, 2, size=GENOME_LENGTH, dtype=np.uint8))


def decode_move(genome, ctx):
    ctx.validate()
    n = ctx.round_number
    bits = genome.bits
    if n == 1:
        return Move(bits[OPENING_OFFSET])
    if n == 2:
        return Move(bits[ROUND2_OFFSET + int(ctx.opponent_opening[0])])
    if n == 3:
        opp1, opp2 = (int(m) for m in ctx.opponent_opening)
        return Move(bits[ROUND3_OFFSET + 2 * opp1 + opp2])
    o1, o2, o3 = (int(o) for o in ctx.recent_outcomes)
    return Move(bits[history_index(o1, o2, o3)])


def cooperation_fraction(genome):
    return genome.bits.count(0) / GENOME_LENGTH


def classify(coop_percent):
    """Map a cooperation percentage onto a :class:`PlayerClass`.

    Intervals are half-open so the integer ranges of the classification
    table cover every real value in [0, 100].
    """
    if not 0 <= coop_percent <= 100:
        raise ContractViolation(f"cooperation percentage must be in [0, 100], got {coop_percent}")
    if coop_percent < 35:
        return PlayerClass.VERY_DISHONEST
    if coop_percent < 45:
        return PlayerClass.DISHONEST
    if coop_percent < 50:
        return PlayerClass.OKAY
    if coop_percent < 55:
        return PlayerClass.GOOD
    if coop_percent <= 65:
        return PlayerClass.COOPERATIVE
    return PlayerClass.VERY_COOPERATIVE


def classify_genome(genome):
    return classify(cooperation_fraction(genome) * 100)


def _check_locus(locus):
    if not MIN_LOCUS <= locus <= MAX_LOCUS:
        raise ContractViolation(f"crossover locus must be in [{MIN_LOCUS}, {MAX_LOCUS}], got {locus}")


def crossover(parent_a, parent_b, locus):
    """Single-point crossover; child 1 takes its head from ``parent_a``."""
    _check_locus(locus)
    a, b = parent_a.bits, parent_b.bits
    return Chromosome(a[:locus] + b[locus:]), Chromosome(b[:locus] + a[locus:])


def mutate(genome, per_bit_rate, rng):
    if not 0.0 <= per_bit_rate <= 1.0:
        raise ContractViolation(f"mutation rate must be in [0, 1], got {per_bit_rate}")
    flips = rng.random(GENOME_LENGTH) < per_bit_rate
    return Chromosome.from_array(genome.to_array() ^ flips.astype(np.uint8))


def mutate_many(genomes, per_bit_rate, rng):
    """Vectorised :func:`mutate` over an ``(n, 71)`` uint8 array.

    Draws one uniform per bit in row-major order, so row ``i`` sees the
    same stream it would get from a sequential ``mutate`` loop.
    """
    if not 0.0 <= per_bit_rate <= 1.0:
        raise ContractViolation(f"mutation rate must be in [0, 1], got {per_bit_rate}")
    genomes = np.asarray(genomes, dtype=np.uint8)
    flips = rng.random(genomes.shape) < per_bit_rate
    return genomes ^ flips.astype(np.uint8)
