"""Command line entry point: ``run``, ``compare`` and ``inspect``.

Exit codes: 0 success, 1 validation error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigError, ContractViolation
from .experiment import ExperimentConfig, compare_schemes, load_config_file, run_experiment
from .genome import (
    Chromosome,
    MatchContext,
    Move,
    classify_genome,
    cooperation_fraction,
    decode_move,
)
from .match import play_match
from .payoff import PayoffParams, Scheme
from .reputation import EMPTY

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _load(args):
    cfg = load_config_file(args.config) if args.config else ExperimentConfig()
    changes = {}
    if getattr(args, "scheme", None):
        changes["scheme"] = args.scheme
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.out:
        changes["output_dir"] = args.out
    if args.workers:
        changes["workers"] = args.workers
    return cfg.replace(**changes) if changes else cfg


def _print_summary(summaries):
    for scheme, s in summaries.items():
        print(
            f"{scheme:>14}: final mean theta {s['final_mean_theta']:.6f} "
            f"(sd {s['final_mean_theta_std']:.6f}, {s['replicates']} replicates), "
            f"cooperative share {s['final_cooperative_share_pct']:.2f}%"
        )


def cmd_run(args):
    cfg = _load(args)
    artifacts = run_experiment(cfg)
    _print_summary(artifacts.summaries)
    print(f"artifacts written to {artifacts.output_dir}")


def cmd_compare(args):
    cfg = _load(args)
    artifacts = compare_schemes(cfg)
    _print_summary(artifacts.summaries)
    print(f"artifacts written to {artifacts.output_dir}")


def _sym(move):
    return Move(move).symbol


def cmd_inspect(args):
    genome = Chromosome.from_string(args.genome)
    frac = cooperation_fraction(genome)
    print(f"genome       {genome}")
    print(f"round 1      {_sym(decode_move(genome, MatchContext(1)))}")
    r2 = [
        f"opp {_sym(o)} -> {_sym(decode_move(genome, MatchContext(2, (o,), (0,))))}"
        for o in Move
    ]
    print(f"round 2      {', '.join(r2)}")
    r3 = [
        f"opp {_sym(o1)}{_sym(o2)} -> {_sym(decode_move(genome, MatchContext(3, (o1, o2), (0, 0))))}"
        for o1 in Move
        for o2 in Move
    ]
    print(f"round 3      {', '.join(r3)}")
    print(f"cooperation  {frac:.6f} ({100 * frac:.2f}%)")
    print(f"class        {classify_genome(genome).label}")

    if args.opponent:
        opponent = Chromosome.from_string(args.opponent)
        params = PayoffParams(Scheme.parse(args.scheme), args.goods_value)
        trace = []
        result, _, _ = play_match(genome, opponent, EMPTY, EMPTY, args.rounds, params, trace=trace)
        print()
        print("round,move_a,move_b,theta_a,theta_b,payoff_a,payoff_b")
        for t in trace:
            print(f"{t.round},{_sym(t.move_a)},{_sym(t.move_b)},{t.theta_a:.6f},{t.theta_b:.6f},"
                  f"{t.payoff_a:.6f},{t.payoff_b:.6f}")
        print(f"totals {result.total_a:.6f} {result.total_b:.6f}")


def build_parser():
    parser = _Parser(prog="coopgame", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key = value config file (defaults if omitted)")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--out", help="override output_dir")
        p.add_argument("--workers", type=int, help="parallel replicate processes")

    run = sub.add_parser("run", help="run one or both schemes")
    common(run)
    run.add_argument("--scheme", choices=[s.value for s in Scheme])
    run.set_defaults(func=cmd_run)

    compare = sub.add_parser("compare", help="run both schemes from identical seeds")
    common(compare)
    compare.set_defaults(func=cmd_compare)

    inspect = sub.add_parser("inspect", help="decode a 71-bit genome string")
    inspect.add_argument("--genome", required=True)
    inspect.add_argument("--opponent", help="also play a traced match against this genome")
    inspect.add_argument("--rounds", type=int, default=10)
    inspect.add_argument("--scheme", default=Scheme.PRO_INCENTIVE.value)
    inspect.add_argument("--goods-value", type=float, default=1.0)
    inspect.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        args.func(args)
    except (ConfigError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        where = f" ({exc.filename})" if exc.filename else ""
        print(f"error: {exc.strerror or exc}{where}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
