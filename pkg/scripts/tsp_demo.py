#!/usr/bin/env python3
"""Estimate every tour length of a travelling-salesman instance through the
phase register and cross-check the minimum against direct enumeration."""

import argparse
import itertools
from pathlib import Path

from qsolve.cli import parse_problem
from qsolve.qpe_tsp import (
    TspConfig,
    display_tour,
    encode_eigenstate,
    phase_scale,
    solve,
    tour_length,
)

DEFAULT_INPUT = Path(__file__).resolve().parents[1] / "problems" / "tsp_four_cities.json"


def brute_force_best(instance):
    n = instance.n_nodes
    best = None
    for rest in itertools.permutations(range(2, n + 1)):
        tour = (1, *rest)
        length = tour_length(instance, tour)
        if best is None or length < best[1]:
            best = (tour, length)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", type=Path, default=DEFAULT_INPUT)
    parser.add_argument("--shots", type=int, default=4096)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    instance = parse_problem(args.input).tsp
    scale, m = phase_scale(instance)
    print(f"{instance.n_nodes} nodes, phase scale {scale}, {m} precision qubits")

    report = solve(instance, TspConfig(shots_per_cycle=args.shots, seed=args.seed))
    print(f"{'cycle':<22} {'eigenstate':>10} {'raw':>4} {'phase':>8} {'length':>7}")
    for result in report.per_cycle:
        enc = encode_eigenstate(result.tour, instance.n_nodes)
        print(f"{str(list(result.tour)):<22} {enc:>10} {result.estimate.raw:>4} "
              f"{result.estimate.phase:>8.4f} {result.length:>7}")

    print(f"\nshortest tour: {list(display_tour(report.best_tour))} "
          f"length {report.best_length}")
    _, brute_length = brute_force_best(instance)
    status = "agrees" if brute_length == report.best_length else "DISAGREES"
    print(f"direct enumeration minimum: {brute_length} ({status})")


if __name__ == "__main__":
    main()
