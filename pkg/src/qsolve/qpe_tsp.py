"""Travelling-salesman solving by per-cycle phase readout.

Each Hamiltonian cycle over nodes 1..n is encoded as a successor table on
n * ceil(log2 n) qubits.  A diagonal operator advances every basis state by
a phase proportional to the total weight of the edges its successor blocks
point along, scaled by a power of two strictly larger than any possible
tour length.  Phase estimation on that eigenstate therefore reads the tour
length back exactly, and the shortest cycle is picked classically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, QubitRegister, build_qft, execute, inverse
from .errors import ProblemValidationError, QubitBudgetError
from .statevector import DEFAULT_QUBIT_CAP, StateVector, phase, probabilities

MIN_NODES = 3
MAX_NODES = 8

Tour = tuple[int, ...]


@dataclass(frozen=True)
class TspInstance:
    """A complete undirected graph given by a symmetric integer weight matrix
    with a zero diagonal; nodes are labelled 1..n."""

    weights: tuple[tuple[int, ...], ...]

    @property
    def n_nodes(self) -> int:
        return len(self.weights)

    def weight(self, a: int, b: int) -> int:
        return self.weights[a - 1][b - 1]


def instance_from_rows(rows: Sequence[Sequence[int]]) -> TspInstance:
    return TspInstance(tuple(tuple(int(x) for x in row) for row in rows))


def validate_instance(instance: TspInstance) -> list[str]:
    """Every semantic violation as a readable diagnostic; empty means valid."""
    diags: list[str] = []
    n = instance.n_nodes
    if not MIN_NODES <= n <= MAX_NODES:
        diags.append(f"node count {n} outside the supported range {MIN_NODES}..{MAX_NODES}")
    for i, row in enumerate(instance.weights):
        if len(row) != n:
            diags.append(f"adjacency[{i}]: expected {n} entries, got {len(row)}")
    if any(len(row) != n for row in instance.weights):
        return diags  # shape is broken; element checks would misfire
    for i in range(n):
        if instance.weights[i][i] != 0:
            diags.append(f"adjacency[{i}][{i}]: diagonal must be 0, got {instance.weights[i][i]}")
        for j in range(n):
            w = instance.weights[i][j]
            if w < 0:
                diags.append(f"adjacency[{i}][{j}]: weights must be non-negative, got {w}")
            if j > i and w != instance.weights[j][i]:
                diags.append(
                    f"adjacency[{i}][{j}]: matrix must be symmetric, "
                    f"got {w} vs adjacency[{j}][{i}] = {instance.weights[j][i]}"
                )
    return diags


def enumerate_cycles(n_nodes: int) -> list[Tour]:
    """All (n-1)!/2 rotation- and reversal-unique Hamiltonian cycles in
    canonical form (start at node 1, second node smaller than last), in
    lexicographic order."""
    if not MIN_NODES <= n_nodes <= MAX_NODES:
        raise ValueError(
            f"node count {n_nodes} outside the supported range {MIN_NODES}..{MAX_NODES}"
        )
    tours: list[Tour] = []
    for rest in itertools.permutations(range(2, n_nodes + 1)):
        if rest[0] < rest[-1]:
            tours.append((1, *rest))
    return tours


def canonical_tour(tour: Sequence[int]) -> Tour:
    """Rotate/reverse a cycle into canonical form."""
    n = len(tour)
    start = tour.index(1) if 1 in tour else 0
    rotated = tuple(tour[(start + i) % n] for i in range(n))
    if rotated[0] != 1:
        raise ValueError(f"tour {tuple(tour)} does not visit node 1")
    if sorted(rotated) != list(range(1, n + 1)):
        raise ValueError(f"tour {tuple(tour)} is not a permutation of 1..{n}")
    if rotated[1] > rotated[-1]:
        rotated = (1, *reversed(rotated[1:]))
    return rotated


def display_tour(tour: Sequence[int]) -> Tour:
    """The same cycle walked in the opposite direction, still from node 1."""
    return (tour[0], *reversed(tuple(tour[1:])))


def tour_length(instance: TspInstance, tour: Sequence[int]) -> int:
    closed = (*tour, tour[0])
    return sum(instance.weight(a, b) for a, b in zip(closed, closed[1:]))


def bits_per_node(n_nodes: int) -> int:
    return (n_nodes - 1).bit_length()  # ceil(log2 n) for n >= 2


def phase_scale(instance: TspInstance) -> tuple[int, int]:
    """(scale, precision_bits): the smallest power of two strictly greater
    than the sum of the n largest edge weights.

    Any Hamiltonian cycle uses n distinct edges, so every tour length is
    strictly below the scale and maps to a distinct exact m-bit phase.
    """
    n = instance.n_nodes
    edges = sorted(
        (instance.weights[i][j] for i in range(n) for j in range(i + 1, n)),
        reverse=True,
    )
    bound = sum(edges[:n])
    m = max(1, bound.bit_length())
    return 1 << m, m


def encode_eigenstate(tour: Sequence[int], n_nodes: int) -> int:
    """Basis index of a cycle's successor table.

    Node i's block of bits_per_node qubits holds successor(i) - 1, MSB
    first; node 1's block sits at qubit 0 (the leftmost bits).
    """
    if sorted(tour) != list(range(1, n_nodes + 1)):
        raise ValueError(f"tour {tuple(tour)} is not a permutation of 1..{n_nodes}")
    b = bits_per_node(n_nodes)
    successor = {tour[i]: tour[(i + 1) % n_nodes] for i in range(n_nodes)}
    index = 0
    for node in range(1, n_nodes + 1):
        index = (index << b) | (successor[node] - 1)
    return index


def decode_successors(index: int, n_nodes: int) -> list[int]:
    """Per-node successor claims of a basis index (1-based, possibly > n)."""
    b = bits_per_node(n_nodes)
    mask = (1 << b) - 1
    claims = []
    for node in range(n_nodes, 0, -1):
        claims.append((index & mask) + 1)
        index >>= b
    return claims[::-1]


def tour_from_encoding(index: int, n_nodes: int) -> Tour:
    """Follow successor claims from node 1; raises if they do not close a
    Hamiltonian cycle."""
    claims = decode_successors(index, n_nodes)
    tour = [1]
    for _ in range(n_nodes - 1):
        nxt = claims[tour[-1] - 1]
        if not 1 <= nxt <= n_nodes or nxt in tour:
            raise ValueError(f"index {index} does not encode a Hamiltonian cycle")
        tour.append(nxt)
    if claims[tour[-1] - 1] != 1:
        raise ValueError(f"index {index} does not encode a Hamiltonian cycle")
    return tuple(tour)


@dataclass(frozen=True)
class WeightPhaseDiagonal:
    """Diagonal operator on the successor register.

    Basis state x picks up exp(2*pi*i * E(x) / scale) where E(x) sums the
    weight of every edge a successor block points along (self-loops and
    out-of-range claims contribute nothing).  Encoded cycles are eigenstates
    with eigenphase tour_length / scale.
    """

    weights: tuple[tuple[int, ...], ...]
    scale: int

    @property
    def n_nodes(self) -> int:
        return len(self.weights)

    @property
    def num_qubits(self) -> int:
        return self.n_nodes * bits_per_node(self.n_nodes)

    def exponent(self, index: int) -> int:
        total = 0
        for node, claim in enumerate(decode_successors(index, self.n_nodes), start=1):
            if claim <= self.n_nodes and claim != node:
                total += self.weights[node - 1][claim - 1]
        return total

    def eigenphase(self, index: int) -> float:
        return (self.exponent(index) % self.scale) / self.scale

    def exponents(self) -> np.ndarray:
        """The full diagonal's exponents, vectorized over all basis states."""
        n = self.n_nodes
        b = bits_per_node(n)
        idx = np.arange(1 << self.num_qubits, dtype=np.int64)
        total = np.zeros_like(idx)
        for node in range(1, n + 1):
            table = np.zeros(1 << b, dtype=np.int64)
            for claim_minus_1 in range(1 << b):
                claim = claim_minus_1 + 1
                if claim <= n and claim != node:
                    table[claim_minus_1] = self.weights[node - 1][claim - 1]
            shift = (n - node) * b
            total += table[(idx >> shift) & (1 << b) - 1]
        return total

    def apply_to(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ValueError(
                f"operator acts on {self.num_qubits} qubits, state has {state.num_qubits}"
            )
        phases = np.exp(2j * np.pi * (self.exponents() % self.scale) / self.scale)
        return StateVector(state.num_qubits, state.amps * phases)


def build_phase_unitary(instance: TspInstance, scale: int) -> WeightPhaseDiagonal:
    return WeightPhaseDiagonal(instance.weights, scale)


# --- phase estimation ---------------------------------------------------------


@dataclass(frozen=True)
class PhaseEstimate:
    raw: int
    precision_bits: int
    phase: float
    probability: float


def qpe_circuit(unitary: WeightPhaseDiagonal, eigenstate: int, precision_bits: int) -> Circuit:
    """Phase-estimation circuit over the precision register alone.

    Because the operator is diagonal, a controlled power U**(2**k) acting on
    the fixed eigenstate collapses to a phase rotation on its own control
    qubit.  Precision qubit j carries the 2**(m-1-j) power so the readout
    is MSB-first, and the inverse Fourier transform is the structural
    inverse of :func:`build_qft`.
    """
    m = precision_bits
    if m < 1:
        raise ValueError(f"need at least one precision qubit, got {m}")
    theta = unitary.eigenphase(eigenstate)
    circ = Circuit(m, registers=(QubitRegister("precision", 0, m),))
    for j in range(m):
        circ.h(j)
    for j in range(m):
        # kickback of U**(2**(m-1-j)); reduce mod 1 before scaling by 2*pi
        turns = math.fmod(theta * (1 << (m - 1 - j)), 1.0)
        circ.phase_on(2.0 * math.pi * turns, j)
    circ.extend(inverse(build_qft(range(m))))
    return circ


def qpe(
    unitary: WeightPhaseDiagonal,
    eigenstate: int,
    precision_bits: int,
    shots: int = 4096,
    seed: int = 0,
    cap: int = DEFAULT_QUBIT_CAP,
) -> PhaseEstimate:
    """Estimate an eigenstate's phase; the modal readout wins (count ties
    broken by bitstring), and the reported probability is the exact
    statevector probability of that readout."""
    if precision_bits > cap:
        raise QubitBudgetError(
            f"{precision_bits} precision qubits requested but the cap is {cap}"
        )
    circuit = qpe_circuit(unitary, eigenstate, precision_bits)
    state, histogram = execute(circuit, shots=shots, seed=seed, cap=cap)
    assert histogram is not None
    top_bits, _ = histogram.most_common()[0]
    raw = int(top_bits, 2)
    return PhaseEstimate(
        raw=raw,
        precision_bits=precision_bits,
        phase=raw / (1 << precision_bits),
        probability=float(probabilities(state)[raw]),
    )


def decode_phase(estimate: PhaseEstimate, scale: int) -> int:
    """Map a phase estimate back to an integer weight: round(phase * scale)."""
    return round(estimate.phase * scale)


# --- solver -------------------------------------------------------------------


@dataclass
class TspConfig:
    shots_per_cycle: int = 4096
    seed: int = 0
    max_qubits: int = DEFAULT_QUBIT_CAP


@dataclass(frozen=True)
class CycleResult:
    tour: Tour
    estimate: PhaseEstimate
    length: int


@dataclass
class TspReport:
    best_tour: Tour
    best_length: int
    per_cycle: list[CycleResult]
    precision_bits: int
    scale: int


def solve(instance: TspInstance, config: TspConfig | None = None) -> TspReport:
    """Estimate every canonical cycle's length through the phase register and
    return the minimum (ties broken by lexicographic tour)."""
    config = config or TspConfig()
    diags = validate_instance(instance)
    if diags:
        raise ProblemValidationError(diags)
    scale, m = phase_scale(instance)
    unitary = build_phase_unitary(instance, scale)
    per_cycle: list[CycleResult] = []
    for tour in enumerate_cycles(instance.n_nodes):
        estimate = qpe(
            unitary,
            encode_eigenstate(tour, instance.n_nodes),
            m,
            shots=config.shots_per_cycle,
            seed=config.seed,
            cap=config.max_qubits,
        )
        per_cycle.append(CycleResult(tour, estimate, decode_phase(estimate, scale)))
    best = min(per_cycle, key=lambda r: (r.length, r.tour))
    return TspReport(
        best_tour=best.tour,
        best_length=best.length,
        per_cycle=per_cycle,
        precision_bits=m,
        scale=scale,
    )
