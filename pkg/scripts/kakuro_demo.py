#!/usr/bin/env python3
"""Solve the bundled Kakuro-style riddles and show how the measured solution
frequencies evolve along the iteration schedule."""

import argparse
from pathlib import Path

import numpy as np

from qsolve.circuit import execute
from qsolve.cli import parse_problem
from qsolve.grover_sat import (
    GroverConfig,
    build_search_circuit,
    classical_check,
    decode_bitstring,
    encode_assignment,
    iteration_schedule,
    qubit_layout,
    solve,
)

PROBLEMS = Path(__file__).resolve().parents[1] / "problems"


def amplification_table(problem, layout):
    """Exact probability of each satisfying assignment after every scheduled
    iteration count, straight from the statevector."""
    n = layout.search_width
    satisfying = [
        index
        for index in range(1 << n)
        if classical_check(decode_bitstring(format(index, f"0{n}b"), problem), problem)
    ]
    print(f"  search qubits: {n}, total qubits: {layout.num_qubits}, "
          f"satisfying assignments: {len(satisfying)}")
    print(f"  {'iterations':>10}  {'p(all solutions)':>16}  {'p(best single)':>15}")
    for iterations in iteration_schedule(n):
        state, _ = execute(build_search_circuit(problem, layout, iterations))
        per_index = (np.abs(state.amps) ** 2).reshape(1 << n, -1).sum(axis=1)
        total = sum(per_index[i] for i in satisfying)
        best = max((per_index[i] for i in satisfying), default=0.0)
        print(f"  {iterations:>10}  {total:>16.6f}  {best:>15.6f}")


def report_solutions(problem, config):
    report = solve(problem, config)
    if not report.found:
        print("  no solution found")
        return
    print(f"  stopped after {report.iterations_used} iteration(s), "
          f"{report.shots} shots, threshold {report.frequency_threshold:.6f}")
    for assignment in report.solutions:
        bits = encode_assignment(assignment, problem)
        count = report.histogram.counts[bits]
        pairs = ", ".join(f"{name} = {assignment[name]}" for name in assignment)
        print(f"  {bits}  ({count:>5} shots)  {pairs}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=4096)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    config = GroverConfig(shots=args.shots, seed=args.seed)

    for name in ("kakuro_unit_sums.json", "kakuro_cross_sums.json"):
        problem = parse_problem(PROBLEMS / name).sat
        print(f"== {name} ==")
        amplification_table(problem, qubit_layout(problem))
        report_solutions(problem, config)
        print()


if __name__ == "__main__":
    main()
