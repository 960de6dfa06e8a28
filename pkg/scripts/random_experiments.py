#!/usr/bin/env python3
"""Seeded randomized experiments: differential oracle runs and solver
cross-checks on freshly generated instances.

Examples:
    python scripts/random_experiments.py --specs 200 --games 500 --seed 7
    python scripts/random_experiments.py --specs 50 --max-stem 3 --max-loop 3
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from rabinsynth.pipeline import differential_test
from rabinsynth.rand import random_game, random_normalized_spec
from rabinsynth.solvers import certify_strategy, solve_progress_measures, solve_zielonka


def run_differential(args) -> int:
    rng = random.Random(args.seed)
    mismatching = 0
    checked = 0
    started = time.perf_counter()
    for i in range(args.specs):
        spec = random_normalized_spec(rng)
        report = differential_test(spec, args.max_stem, args.max_loop)
        checked += report.checked
        if report.mismatches:
            mismatching += 1
            print(f"  spec {i}: {report.mismatches} mismatches")
    elapsed = time.perf_counter() - started
    print(f"differential: {args.specs} specs, {checked} lassos, "
          f"{mismatching} bad specs, {elapsed:.2f}s")
    return mismatching


def run_solver_cross_check(args) -> int:
    rng = random.Random(args.seed + 1)
    disagreements = 0
    started = time.perf_counter()
    for i in range(args.games):
        game = random_game(rng, max_states=args.max_game_states)
        solution = solve_zielonka(game)
        if solve_progress_measures(game) != solution.system_region:
            disagreements += 1
            print(f"  game {i}: winning regions disagree")
        elif certify_strategy(game, solution) is not None:
            disagreements += 1
            print(f"  game {i}: certification failed")
    elapsed = time.perf_counter() - started
    print(f"solvers: {args.games} games, {disagreements} disagreements, "
          f"{elapsed:.2f}s")
    return disagreements


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--specs", type=int, default=100)
    parser.add_argument("--games", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-stem", type=int, default=2)
    parser.add_argument("--max-loop", type=int, default=3)
    parser.add_argument("--max-game-states", type=int, default=50)
    args = parser.parse_args()
    bad = run_differential(args) + run_solver_cross_check(args)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
