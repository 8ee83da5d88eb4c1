"""Time one generation of play with each available match kernel.

    python benchmarks/bench_core.py --width 20 --height 20 --rounds 50

The pure-Python fallback is slow by design; use small grids for it.
"""
import argparse
import time

import numpy as np

from coopgame.backend import available_backends
from coopgame.grid import GaParams, Grid, evaluate_generation
from coopgame.payoff import PayoffParams, Scheme


def bench(kernel, grid, params, ga, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        evaluate_generation(grid, params, ga, kernel=kernel)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--width", type=int, default=20)
    parser.add_argument("--height", type=int, default=20)
    parser.add_argument("--rounds", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--scheme", default="pro_incentive", choices=[s.value for s in Scheme])
    args = parser.parse_args()

    grid = Grid.random(args.width, args.height, np.random.default_rng(0))
    params = PayoffParams(Scheme(args.scheme), 1.0)
    ga = GaParams(rounds_per_match=args.rounds)
    rounds_played = 4 * grid.size * args.rounds

    timings = {}
    for name, kernel in available_backends().items():
        timings[name] = bench(kernel, grid, params, ga, args.repeat)
        rate = rounds_played / timings[name]
        print(f"{name:>7}: {timings[name] * 1e3:9.2f} ms/generation  ({rate / 1e6:7.2f} M rounds/s)")
    if "cython" in timings:
        print(f"speedup: {timings['python'] / timings['cython']:.0f}x")


if __name__ == "__main__":
    main()
