"""Dense statevector simulation with bitmask gate kernels.

Convention used everywhere in this package: qubit 0 is the most
significant bit of a basis-state index, so the leftmost character of a
measured bitstring is qubit 0.  Controlled gates of any arity are applied
natively by index selection; they are never decomposed into smaller gates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import QubitBudgetError

DEFAULT_QUBIT_CAP = 26

# amplitude / probability tolerances used across the package
NORM_TOL = 1e-9
UNITARY_TOL = 1e-12
PROB_ZERO_TOL = 1e-12
ANCILLA_LEAK_TOL = 1e-9

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_GATE_NAMES = ("h", "x", "z", "phase", "swap")


@dataclass(frozen=True)
class Gate:
    """A primitive gate kind; ``lam`` is the rotation angle for ``phase``."""

    name: str
    lam: float = 0.0

    def __post_init__(self):
        if self.name not in _GATE_NAMES:
            raise ValueError(f"unknown gate kind {self.name!r}")
        if not math.isfinite(self.lam):
            raise ValueError("phase angle must be finite")
        if self.name != "phase" and self.lam != 0.0:
            raise ValueError(f"gate {self.name!r} takes no angle")

    @property
    def num_targets(self) -> int:
        return 2 if self.name == "swap" else 1

    def matrix(self) -> np.ndarray:
        """The gate's unitary on its own targets (2x2, or 4x4 for swap)."""
        if self.name == "h":
            return np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2
        if self.name == "x":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if self.name == "z":
            return np.array([[1, 0], [0, -1]], dtype=complex)
        if self.name == "phase":
            return np.array([[1, 0], [0, np.exp(1j * self.lam)]], dtype=complex)
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
            dtype=complex,
        )

    def inverse(self) -> "Gate":
        if self.name == "phase":
            return Gate("phase", -self.lam)
        return self  # h, x, z and swap are their own inverses


H = Gate("h")
X = Gate("x")
Z = Gate("z")
SWAP = Gate("swap")


def phase(lam: float) -> Gate:
    return Gate("phase", float(lam))


@dataclass
class StateVector:
    """Amplitudes of an ``num_qubits``-qubit register, index 0 = all zeros."""

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for "
                f"{self.num_qubits} qubits, got shape {self.amps.shape}"
            )

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amps.copy())


@dataclass(frozen=True)
class Histogram:
    """Measurement outcome counts keyed by bitstring, keys sorted."""

    shots: int
    counts: dict[str, int]

    def most_common(self) -> list[tuple[str, int]]:
        """Outcomes by descending count, ties broken by bitstring."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))


def init_zero(num_qubits: int, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """The all-zeros computational basis state.

    Refuses to allocate more than ``cap`` qubits: a dense register takes
    16 * 2**n bytes, so the default cap of 26 tops out at 1 GiB.
    """
    if num_qubits < 1:
        raise ValueError(f"need at least one qubit, got {num_qubits}")
    if num_qubits > cap:
        raise QubitBudgetError(
            f"{num_qubits} qubits requested but the simulator cap is {cap}"
        )
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _mask(num_qubits: int, qubit: int) -> int:
    # qubit 0 is the most significant index bit
    return 1 << (num_qubits - 1 - qubit)


_BASIS_CACHE: dict[int, np.ndarray] = {}


def _basis(dim: int) -> np.ndarray:
    arr = _BASIS_CACHE.get(dim)
    if arr is None:
        arr = np.arange(dim, dtype=np.int64)
        _BASIS_CACHE[dim] = arr
    return arr


def check_operands(
    num_qubits: int,
    gate: Gate,
    controls: Iterable[int],
    targets: Iterable[int],
) -> tuple[frozenset[int], tuple[int, ...]]:
    """Validate and normalize an operation's qubit operands."""
    controls = frozenset(int(q) for q in controls)
    targets = tuple(int(q) for q in targets)
    if len(targets) != gate.num_targets:
        raise ValueError(
            f"gate {gate.name!r} takes {gate.num_targets} target(s), got {len(targets)}"
        )
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits in {targets}")
    for q in (*targets, *controls):
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit {q} out of range for a {num_qubits}-qubit register")
    overlap = controls.intersection(targets)
    if overlap:
        raise ValueError(f"controls and targets overlap on qubits {sorted(overlap)}")
    return controls, targets


def apply_gate_in_place(
    state: StateVector,
    gate: Gate,
    controls: Iterable[int] = (),
    targets: Iterable[int] = (),
) -> None:
    """Apply a (multi-)controlled gate by direct index selection, mutating ``state``."""
    controls, targets = check_operands(state.num_qubits, gate, controls, targets)
    amps = state.amps
    idx = _basis(amps.shape[0])
    cmask = 0
    for q in controls:
        cmask |= _mask(state.num_qubits, q)

    if gate.name == "swap":
        m1 = _mask(state.num_qubits, targets[0])
        m2 = _mask(state.num_qubits, targets[1])
        # pairs differing only in the two target bits, once per pair
        i0 = idx[(idx & (cmask | m1 | m2)) == (cmask | m1)]
        i1 = i0 ^ (m1 | m2)
        tmp = amps[i0]
        amps[i0] = amps[i1]
        amps[i1] = tmp
        return

    t = _mask(state.num_qubits, targets[0])
    if gate.name in ("z", "phase"):
        # diagonal: only the control+target-all-ones slice changes
        sel = (idx & (cmask | t)) == (cmask | t)
        amps[sel] *= -1.0 if gate.name == "z" else np.exp(1j * gate.lam)
        return

    i0 = idx[(idx & (cmask | t)) == cmask]
    i1 = i0 | t
    if gate.name == "x":
        tmp = amps[i0]
        amps[i0] = amps[i1]
        amps[i1] = tmp
    else:  # h
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = (a0 + a1) * _INV_SQRT2
        amps[i1] = (a0 - a1) * _INV_SQRT2


def apply_gate(
    state: StateVector,
    gate: Gate,
    controls: Iterable[int] = (),
    targets: Iterable[int] = (),
) -> StateVector:
    """Functional variant of :func:`apply_gate_in_place`."""
    out = state.copy()
    apply_gate_in_place(out, gate, controls, targets)
    return out


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amps) ** 2


def norm(state: StateVector) -> float:
    return float(np.sqrt(probabilities(state).sum()))


def _check_subset(num_qubits: int, qubits: Sequence[int]) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if not qs:
        raise ValueError("qubit subset must not be empty")
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubits in subset {qs}")
    for q in qs:
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit {q} out of range for a {num_qubits}-qubit register")
    return qs


def bitstring(index: int, num_qubits: int, qubits: Sequence[int] | None = None) -> str:
    """Readout of ``index`` over ``qubits`` in the given order (default: all)."""
    qs = range(num_qubits) if qubits is None else qubits
    return "".join("1" if index & _mask(num_qubits, q) else "0" for q in qs)


def marginal_probabilities(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Readout distribution over a qubit subset; entry i is the probability
    of the subset bitstring with value i (first listed qubit = leftmost bit)."""
    qs = _check_subset(state.num_qubits, qubits)
    p = probabilities(state)
    idx = _basis(p.shape[0])
    k = len(qs)
    sub = np.zeros_like(idx)
    for pos, q in enumerate(qs):
        bit = (idx >> (state.num_qubits - 1 - q)) & 1
        sub |= bit << (k - 1 - pos)
    return np.bincount(sub, weights=p, minlength=1 << k)


def sample(
    state: StateVector,
    shots: int,
    seed: int,
    qubits: Sequence[int] | None = None,
) -> Histogram:
    """Draw ``shots`` basis-state measurements of a qubit subset.

    Probabilities below ``PROB_ZERO_TOL`` are clamped to zero before
    normalizing, so numerically-dead outcomes can never fire.  The same
    seed always yields the same histogram.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    qs = _check_subset(
        state.num_qubits, range(state.num_qubits) if qubits is None else qubits
    )
    p = probabilities(state)
    p = np.where(p < PROB_ZERO_TOL, 0.0, p)
    total = p.sum()
    if total <= 0.0:
        raise ValueError("state has no measurable probability mass")
    p /= total
    rng = np.random.default_rng(seed)
    draws = rng.choice(p.shape[0], size=shots, p=p)
    values, freq = np.unique(draws, return_counts=True)
    counts: dict[str, int] = {}
    # distinct full-register outcomes may project onto the same subset key
    for v, c in sorted(
        zip(values, freq), key=lambda vc: bitstring(int(vc[0]), state.num_qubits, qs)
    ):
        key = bitstring(int(v), state.num_qubits, qs)
        counts[key] = counts.get(key, 0) + int(c)
    return Histogram(shots=shots, counts=counts)
