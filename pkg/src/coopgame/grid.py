"""Toroidal population grid: one generation of play, then local reproduction."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backend
from .errors import ContractViolation
from .genome import GENOME_LENGTH, Chromosome, PlayerClass, classify, random_genome
from .reputation import TransactionHistory

SELECTION_EPS = 1e-9

# display / CSV order, most cooperative first
CLASS_ORDER = (
    PlayerClass.VERY_COOPERATIVE,
    PlayerClass.COOPERATIVE,
    PlayerClass.GOOD,
    PlayerClass.OKAY,
    PlayerClass.DISHONEST,
    PlayerClass.VERY_DISHONEST,
)

# class of a genome with k cooperate bits, k = 0..71
_CLASS_BY_ZEROS = np.array(
    [int(classify(k * 100 / GENOME_LENGTH)) for k in range(GENOME_LENGTH + 1)], dtype=np.int64
)


@dataclass(frozen=True)
class GaParams:
    crossover_rate: float = 0.5
    mutation_rate: float = 0.001
    rounds_per_match: int = 100

    def __post_init__(self):
        for name in ("crossover_rate", "mutation_rate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ContractViolation(f"{name} must be in [0, 1], got {p}")
        if self.rounds_per_match < 1:
            raise ContractViolation(f"rounds_per_match must be >= 1, got {self.rounds_per_match}")


@dataclass(frozen=True)
class PlayerState:
    genome: Chromosome
    ledger: TransactionHistory
    fitness: float


@dataclass
class Grid:
    """Row-major population of ``width * height`` players.

    Genomes are an ``(n, 71)`` uint8 array; ledgers are split into the
    ``coop`` / ``defect`` count arrays.
    """

    width: int
    height: int
    genomes: np.ndarray
    coop: np.ndarray
    defect: np.ndarray
    fitness: np.ndarray
    evaluated: bool = False

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise ContractViolation(f"grid must be at least 3x3, got {self.width}x{self.height}")
        n = self.width * self.height
        self.genomes = np.ascontiguousarray(self.genomes, dtype=np.uint8)
        self.coop = np.ascontiguousarray(self.coop, dtype=np.int64)
        self.defect = np.ascontiguousarray(self.defect, dtype=np.int64)
        self.fitness = np.ascontiguousarray(self.fitness, dtype=np.float64)
        if self.genomes.shape != (n, GENOME_LENGTH):
            raise ContractViolation(f"genomes must have shape ({n}, {GENOME_LENGTH})")
        if self.coop.shape != (n,) or self.defect.shape != (n,) or self.fitness.shape != (n,):
            raise ContractViolation("ledger and fitness arrays must have one entry per cell")

    @classmethod
    def fresh(cls, width, height, genomes):
        n = width * height
        return cls(
            width,
            height,
            genomes,
            np.zeros(n, dtype=np.int64),
            np.zeros(n, dtype=np.int64),
            np.zeros(n, dtype=np.float64),
        )

    @classmethod
    def random(cls, width, height, rng):
        """Fill cells in row-major order with :func:`random_genome` draws."""
        genomes = np.array(
            [random_genome(rng).bits for _ in range(width * height)], dtype=np.uint8
        )
        return cls.fresh(width, height, genomes)

    @classmethod
    def uniform(cls, width, height, genome):
        row = np.asarray(genome.bits if isinstance(genome, Chromosome) else genome, dtype=np.uint8)
        return cls.fresh(width, height, np.tile(row, (width * height, 1)))

    @property
    def size(self):
        return self.width * self.height

    def index(self, row, col):
        return (row % self.height) * self.width + (col % self.width)

    def thetas(self):
        total = self.coop + self.defect
        safe = np.where(total > 0, total, 1)
        return np.where(total > 0, self.coop / safe, 1.0)

    def player(self, i):
        return PlayerState(
            Chromosome.from_array(self.genomes[i]),
            TransactionHistory(int(self.coop[i]), int(self.defect[i])),
            float(self.fitness[i]),
        )

    def players(self):
        return [self.player(i) for i in range(self.size)]

    def is_fresh(self):
        return (
            not self.evaluated
            and not self.coop.any()
            and not self.defect.any()
            and not self.fitness.any()
        )

    def copy(self):
        return Grid(
            self.width,
            self.height,
            self.genomes.copy(),
            self.coop.copy(),
            self.defect.copy(),
            self.fitness.copy(),
            self.evaluated,
        )


@lru_cache(maxsize=32)
def canonical_edges(width, height):
    """Each Moore-neighbour pair once: per cell, its E, SW, S and SE neighbours.

    Cells are visited row-major and the visiting cell is always the first
    column of the returned ``(4n, 2)`` array.
    """
    edges = []
    for r in range(height):
        for c in range(width):
            i = r * width + c
            for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
                edges.append((i, ((r + dr) % height) * width + (c + dc) % width))
    out = np.array(edges, dtype=np.int64)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=32)
def neighbourhoods(width, height):
    """``(n, 9)`` indices of each cell's 3x3 block, self included, row-major."""
    rows = np.arange(height)[:, None, None, None]
    cols = np.arange(width)[None, :, None, None]
    d = np.arange(-1, 2)
    dr = d[None, None, :, None]
    dc = d[None, None, None, :]
    idx = ((rows + dr) % height) * width + (cols + dc) % width
    out = idx.reshape(width * height, 9).astype(np.int64)
    out.flags.writeable = False
    return out


def evaluate_generation(grid, params, ga, kernel=None):
    """Play every neighbour match once in canonical order; returns a new evaluated grid.

    Reputation is live: matches are played sequentially and each player's
    ledger carries over from one of its matches to the next.
    """
    if not grid.is_fresh():
        raise ContractViolation("evaluate_generation needs a grid with reset fitness and ledgers")
    kernel = kernel or backend.play_generation
    out = grid.copy()
    kernel(
        out.genomes,
        canonical_edges(grid.width, grid.height),
        ga.rounds_per_match,
        params.pro_incentive,
        params.goods_value,
        out.coop,
        out.defect,
        out.fitness,
    )
    out.evaluated = True
    return out


def roulette_indices(weights, u):
    """Row-wise roulette: first column whose running total exceeds ``u * total``."""
    cum = np.cumsum(weights, axis=1)
    target = u * cum[:, -1]
    picks = np.sum(cum <= target[:, None], axis=1)
    return np.minimum(picks, weights.shape[1] - 1)


def next_generation(grid, ga, rng):
    """Breed a full replacement population from an evaluated grid.

    Random draws, in order: selection uniforms ``(n, 2)``, crossover
    uniforms ``(n,)``, crossover loci ``(n,)`` in [1, 70], mutation
    uniforms ``(n, 71)``. Loci are drawn for every cell whether or not it
    crosses over, so the stream layout never depends on the data.
    """
    if not grid.evaluated:
        raise ContractViolation("next_generation needs an evaluated grid")
    n = grid.size
    sel_u = rng.random((n, 2))
    cx_u = rng.random(n)
    loci = rng.integers(1, GENOME_LENGTH, size=n)
    mut_u = rng.random((n, GENOME_LENGTH))

    hood = neighbourhoods(grid.width, grid.height)
    local = grid.fitness[hood]
    weights = local - local.min(axis=1, keepdims=True) + SELECTION_EPS
    p1 = hood[np.arange(n), roulette_indices(weights, sel_u[:, 0])]
    p2 = hood[np.arange(n), roulette_indices(weights, sel_u[:, 1])]

    head = np.arange(GENOME_LENGTH)[None, :] < loci[:, None]
    crossed = np.where(head, grid.genomes[p1], grid.genomes[p2])
    child = np.where((cx_u < ga.crossover_rate)[:, None], crossed, grid.genomes[p1])
    child ^= (mut_u < ga.mutation_rate).astype(np.uint8)
    return Grid.fresh(grid.width, grid.height, child)


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    class_shares: tuple  # percentages in CLASS_ORDER
    mean_theta: float
    mean_fitness: float
    coop_move_fraction: float

    def as_row(self):
        return (self.generation, *self.class_shares, self.mean_theta, self.mean_fitness, self.coop_move_fraction)


def class_counts(genomes):
    zeros = GENOME_LENGTH - genomes.sum(axis=1, dtype=np.int64)
    classes = _CLASS_BY_ZEROS[zeros]
    counts = np.bincount(classes, minlength=len(PlayerClass))
    return {cls: int(counts[int(cls)]) for cls in CLASS_ORDER}


def genome_classes(genomes):
    zeros = GENOME_LENGTH - genomes.sum(axis=1, dtype=np.int64)
    return [PlayerClass(int(k)) for k in _CLASS_BY_ZEROS[zeros]]


def population_stats(grid, generation=0):
    n = grid.size
    counts = class_counts(grid.genomes)
    shares = tuple(100.0 * counts[cls] / n for cls in CLASS_ORDER)
    total_coop = int(grid.coop.sum())
    total_moves = total_coop + int(grid.defect.sum())
    coop_frac = total_coop / total_moves if total_moves else 1.0
    return GenerationStats(
        generation=generation,
        class_shares=shares,
        mean_theta=float(grid.thetas().mean()),
        mean_fitness=float(grid.fitness.mean()),
        coop_move_fraction=coop_frac,
    )
