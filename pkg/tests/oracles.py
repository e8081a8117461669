"""Independent reference computations the test suite checks the package
against.  Everything here is built from explicit matrices, projector
algebra and brute-force enumeration, deliberately sharing no code with the
package's bitmask kernels.

Index convention matches the package: qubit 0 is the first Kronecker
factor, i.e. the most significant bit of a basis index.
"""

import itertools
import math
from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)

GATE_1Q = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def single_qubit_matrix(name: str, lam: float = 0.0) -> np.ndarray:
    if name == "phase":
        return np.array([[1, 0], [0, np.exp(1j * lam)]], dtype=complex)
    return GATE_1Q[name]


def kron_chain(factors) -> np.ndarray:
    return reduce(np.kron, factors)


def embedded_single(
    gate2: np.ndarray, num_qubits: int, target: int, controls=()
) -> np.ndarray:
    """Full-register matrix of a controlled single-qubit gate.

    Projector form: P1(controls) (x) U on the target, plus the identity on
    the complement of the control subspace.
    """
    controls = set(controls)
    active = kron_chain(
        [P1 if q in controls else (gate2 if q == target else I2) for q in range(num_qubits)]
    )
    control_subspace = kron_chain(
        [P1 if q in controls else I2 for q in range(num_qubits)]
    )
    return active + (np.eye(1 << num_qubits, dtype=complex) - control_subspace)


def embedded_swap(num_qubits: int, t1: int, t2: int, controls=()) -> np.ndarray:
    """Controlled swap as a product of three controlled-X embeddings."""
    x = GATE_1Q["x"]
    a = embedded_single(x, num_qubits, t2, (*controls, t1))
    b = embedded_single(x, num_qubits, t1, (*controls, t2))
    return a @ b @ a


def embedded_op(
    num_qubits: int, name: str, lam: float, controls, targets
) -> np.ndarray:
    if name == "swap":
        return embedded_swap(num_qubits, targets[0], targets[1], controls)
    return embedded_single(single_qubit_matrix(name, lam), num_qubits, targets[0], controls)


def circuit_matrix(circuit) -> np.ndarray:
    """Full unitary of a circuit, op by op, from the embedded matrices."""
    dim = 1 << circuit.num_qubits
    mat = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        mat = (
            embedded_op(
                circuit.num_qubits, op.gate.name, op.gate.lam, op.controls, op.targets
            )
            @ mat
        )
    return mat


def dft_matrix(num_qubits: int) -> np.ndarray:
    """W[l, j] = exp(2*pi*i*l*j / 2**m) / sqrt(2**m)."""
    dim = 1 << num_qubits
    grid = np.outer(np.arange(dim), np.arange(dim))
    return np.exp(2j * np.pi * grid / dim) / math.sqrt(dim)


def amplification_probability(search_qubits: int, num_solutions: int, iterations: int) -> float:
    """Total success probability after ``iterations`` oracle+diffuser rounds,
    from the closed-form rotation picture."""
    theta = math.asin(math.sqrt(num_solutions / (1 << search_qubits)))
    return math.sin((2 * iterations + 1) * theta) ** 2


# --- brute-force constraint evaluation ---------------------------------------


def assignment_satisfies(assignment: dict, constraints) -> bool:
    """Independent evaluation of (kind, payload) constraint tuples:
    ("not_equal", a, b), ("equal_const", a, value), ("sum_equals", names, value).
    """
    for rule in constraints:
        kind = rule[0]
        if kind == "not_equal":
            if assignment[rule[1]] == assignment[rule[2]]:
                return False
        elif kind == "equal_const":
            if assignment[rule[1]] != rule[2]:
                return False
        elif kind == "sum_equals":
            if sum(assignment[name] for name in rule[1]) != rule[2]:
                return False
        else:
            raise ValueError(f"unknown kind {kind!r}")
    return True


def enumerate_satisfying(var_widths, constraints) -> list[dict]:
    """All satisfying assignments of ``var_widths`` (name -> bits), ordered
    by the concatenated bitstring value."""
    names = list(var_widths)
    found = []
    for values in itertools.product(*((range(1 << var_widths[n])) for n in names)):
        assignment = dict(zip(names, values))
        if assignment_satisfies(assignment, constraints):
            found.append(assignment)
    return found


# --- brute-force tours ---------------------------------------------------------


def brute_force_tours(weights) -> list[tuple[tuple[int, ...], int]]:
    """(canonical tour, length) for every rotation/reversal-unique cycle."""
    n = len(weights)
    results = []
    for rest in itertools.permutations(range(2, n + 1)):
        if rest[0] >= rest[-1]:
            continue
        tour = (1, *rest)
        closed = (*tour, tour[0])
        length = sum(weights[a - 1][b - 1] for a, b in zip(closed, closed[1:]))
        results.append((tour, length))
    return results


# --- independent full phase estimation -----------------------------------------


def reference_qpe_distribution(
    exponents: np.ndarray, eigenstate: int, scale: int, precision_bits: int
) -> np.ndarray:
    """Readout distribution of textbook phase estimation, simulated directly
    with numpy on the joint precision+target register.

    The target register starts in the given basis state; each precision
    qubit j controls the diagonal operator raised to the 2**(m-1-j) power;
    then the inverse Fourier transform acts on the precision register alone.
    Returns the probability of each m-bit readout.
    """
    m = precision_bits
    pdim = 1 << m
    tdim = exponents.shape[0]
    # joint amplitudes indexed [precision_value, target_value]
    joint = np.zeros((pdim, tdim), dtype=complex)
    joint[:, eigenstate] = 1.0 / math.sqrt(pdim)  # H on every precision qubit
    unit_phase = np.exp(2j * np.pi * np.asarray(exponents) / scale)
    for j in range(m):
        power = 1 << (m - 1 - j)
        controlled = unit_phase**power
        rows = (np.arange(pdim) >> (m - 1 - j)) & 1  # precision qubit j set?
        joint[rows == 1, :] *= controlled[np.newaxis, :]
    inv_qft = dft_matrix(m).conj().T
    joint = inv_qft @ joint
    return (np.abs(joint) ** 2).sum(axis=1)
