"""Evolution of cooperation in a reputation-scaled online business game.

Memory-3 strategies encoded as 71-bit chromosomes play iterated
buyer/seller games with their Moore neighbours on a torus, under either
a plain payoff matrix or one where mutual cooperation and mutual
defection are scaled by each player's reputation. A local genetic
algorithm breeds the next generation from match payoffs.
"""
from .backend import BACKEND
from .errors import ConfigError, ContractViolation
from .experiment import ExperimentConfig, compare_schemes, load_config, run_experiment
from .genome import (
    Chromosome,
    MatchContext,
    Move,
    PlayerClass,
    classify,
    cooperation_fraction,
    crossover,
    decode_move,
    mutate,
    random_genome,
)
from .grid import GaParams, GenerationStats, Grid, evaluate_generation, next_generation, population_stats
from .match import MatchResult, play_match
from .payoff import PayoffParams, RoundPayoffs, Scheme, round_payoffs
from .reputation import TransactionHistory, expected_cooperation, record

__version__ = "0.1.0"
