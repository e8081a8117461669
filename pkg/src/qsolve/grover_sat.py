"""Constraint problems solved by amplitude-amplified search.

Variables are unsigned integers with fixed bit widths, laid out MSB-first
on a search register in declaration order.  Each constraint compiles to a
reversible checker that flips a dedicated flag qubit exactly on satisfying
assignments and restores every qubit it borrowed.  The oracle computes all
flags, applies a phase flip when every flag is set, then uncomputes; the
number of amplification rounds follows a growing schedule because the
solution count is unknown up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

from .circuit import Circuit, QubitRegister, execute, inverse
from .errors import ProblemValidationError, QubitBudgetError
from .statevector import DEFAULT_QUBIT_CAP, Histogram, Z

Assignment = dict[str, int]


@dataclass(frozen=True)
class VarDecl:
    name: str
    bits: int


@dataclass(frozen=True)
class NotEqual:
    """a != b; both operands must have the same width."""

    a: str
    b: str


@dataclass(frozen=True)
class EqualConst:
    """a == value for a constant in the variable's range."""

    a: str
    value: int


@dataclass(frozen=True)
class SumEquals:
    """sum(vars) == value; repeated names count multiply."""

    vars: tuple[str, ...]
    value: int


Constraint = Union[NotEqual, EqualConst, SumEquals]


@dataclass(frozen=True)
class SatProblem:
    vars: tuple[VarDecl, ...]
    constraints: tuple[Constraint, ...]

    def widths(self) -> dict[str, int]:
        return {v.name: v.bits for v in self.vars}

    @property
    def search_width(self) -> int:
        return sum(v.bits for v in self.vars)


def validate_problem(problem: SatProblem) -> list[str]:
    """Every semantic violation as a readable diagnostic; empty means valid."""
    diags: list[str] = []
    if not problem.vars:
        diags.append("problem declares no variables")
    if not problem.constraints:
        diags.append("problem declares no constraints")
    widths: dict[str, int] = {}
    for i, v in enumerate(problem.vars):
        where = f"variables[{i}]"
        if not v.name.isidentifier():
            diags.append(f"{where}: name {v.name!r} is not an identifier")
        if v.name in widths:
            diags.append(f"{where}: duplicate variable name {v.name!r}")
        if v.bits < 1:
            diags.append(f"{where}: width must be at least 1, got {v.bits}")
        widths[v.name] = v.bits
    for i, c in enumerate(problem.constraints):
        where = f"constraints[{i}]"
        if isinstance(c, NotEqual):
            missing = [n for n in (c.a, c.b) if n not in widths]
            for n in missing:
                diags.append(f"{where}: undeclared variable {n!r}")
            if not missing and widths[c.a] != widths[c.b]:
                diags.append(
                    f"{where}: not_equal needs equal widths, "
                    f"{c.a!r} has {widths[c.a]} bits and {c.b!r} has {widths[c.b]}"
                )
        elif isinstance(c, EqualConst):
            if c.a not in widths:
                diags.append(f"{where}: undeclared variable {c.a!r}")
            elif not 0 <= c.value < (1 << widths[c.a]):
                diags.append(
                    f"{where}: value {c.value} outside the range of {c.a!r} "
                    f"(0..{(1 << widths[c.a]) - 1})"
                )
        elif isinstance(c, SumEquals):
            if not c.vars:
                diags.append(f"{where}: sum_equals needs at least one variable")
            missing = [n for n in c.vars if n not in widths]
            for n in missing:
                diags.append(f"{where}: undeclared variable {n!r}")
            if c.vars and not missing:
                top = sum((1 << widths[n]) - 1 for n in c.vars)
                if not 0 <= c.value <= top:
                    diags.append(
                        f"{where}: value {c.value} outside the achievable sum range (0..{top})"
                    )
        else:
            diags.append(f"{where}: unknown constraint type {type(c).__name__}")
    return diags


def classical_check(assignment: Assignment, problem: SatProblem) -> bool:
    """Plain integer evaluation of every constraint; the ground truth the
    quantum path is verified against."""
    for c in problem.constraints:
        if isinstance(c, NotEqual):
            if assignment[c.a] == assignment[c.b]:
                return False
        elif isinstance(c, EqualConst):
            if assignment[c.a] != c.value:
                return False
        else:
            if sum(assignment[n] for n in c.vars) != c.value:
                return False
    return True


# --- qubit layout ------------------------------------------------------------


@dataclass(frozen=True)
class QubitLayout:
    """Placement of a problem on qubits: search register first (variables in
    declaration order, each MSB-first), one flag qubit per constraint, then a
    shared sum scratch register sized for the widest sum constraint."""

    var_ranges: tuple[tuple[str, int, int], ...]  # (name, offset, width)
    search_width: int
    flag_qubits: tuple[int, ...]
    scratch_offset: int
    scratch_width: int
    num_qubits: int

    def var_qubits(self, name: str) -> range:
        for vname, offset, width in self.var_ranges:
            if vname == name:
                return range(offset, offset + width)
        raise KeyError(f"no variable named {name!r}")

    @property
    def search_qubits(self) -> range:
        return range(self.search_width)

    @property
    def scratch_qubits(self) -> range:
        return range(self.scratch_offset, self.scratch_offset + self.scratch_width)


def qubit_layout(problem: SatProblem, max_qubits: int = DEFAULT_QUBIT_CAP) -> QubitLayout:
    diags = validate_problem(problem)
    if diags:
        raise ProblemValidationError(diags)
    widths = problem.widths()
    var_ranges = []
    offset = 0
    for v in problem.vars:
        var_ranges.append((v.name, offset, v.bits))
        offset += v.bits
    search_width = offset
    flag_qubits = tuple(range(search_width, search_width + len(problem.constraints)))
    scratch_offset = search_width + len(flag_qubits)
    scratch_width = 0
    for c in problem.constraints:
        if isinstance(c, SumEquals):
            top = sum((1 << widths[n]) - 1 for n in c.vars)
            scratch_width = max(scratch_width, top.bit_length())
    num_qubits = scratch_offset + scratch_width
    if num_qubits > max_qubits:
        raise QubitBudgetError(
            f"layout needs {num_qubits} qubits "
            f"({search_width} search + {len(flag_qubits)} flags + {scratch_width} scratch) "
            f"but the cap is {max_qubits}"
        )
    return QubitLayout(
        var_ranges=tuple(var_ranges),
        search_width=search_width,
        flag_qubits=flag_qubits,
        scratch_offset=scratch_offset,
        scratch_width=scratch_width,
        num_qubits=num_qubits,
    )


# --- constraint synthesis ------------------------------------------------------


def synth_not_equal(layout: QubitLayout, a: str, b: str, flag: int) -> Circuit:
    """Flag-flip fragment for a != b.

    XORs a into b, detects the all-zeros pattern (equality) onto the flag,
    inverts the flag, then undoes the XOR.  The same variable on both sides
    compiles to an empty fragment: x != x never holds, so the flag stays 0.
    """
    frag = Circuit(layout.num_qubits)
    if a == b:
        return frag
    aq = layout.var_qubits(a)
    bq = layout.var_qubits(b)
    for qa, qb in zip(aq, bq):
        frag.cx(qa, qb)
    for qb in bq:
        frag.x(qb)
    frag.mcx(tuple(bq), flag)
    frag.x(flag)
    for qb in bq:
        frag.x(qb)
    for qa, qb in zip(aq, bq):
        frag.cx(qa, qb)
    return frag


def synth_equal_const(layout: QubitLayout, a: str, value: int, flag: int) -> Circuit:
    """Flag-flip fragment for a == value: X-conjugate the zero bits of the
    pattern so an all-ones detection fires exactly on the constant."""
    frag = Circuit(layout.num_qubits)
    aq = tuple(layout.var_qubits(a))
    width = len(aq)
    zero_positions = [q for i, q in enumerate(aq) if not (value >> (width - 1 - i)) & 1]
    for q in zero_positions:
        frag.x(q)
    frag.mcx(aq, flag)
    for q in zero_positions:
        frag.x(q)
    return frag


def _controlled_add_power(
    frag: Circuit, control: int, weight: int, sum_qubits: Sequence[int]
) -> None:
    """Add 2**weight into the scratch accumulator when ``control`` is set.

    ``sum_qubits`` is MSB-first.  The ripple targets high bits first so each
    carry control still reads the pre-increment value of the lower bits.
    """
    k = len(sum_qubits)
    for j in range(k - 1, weight - 1, -1):  # bit significance j, descending
        lower = tuple(sum_qubits[k - 1 - i] for i in range(weight, j))
        frag.mcx((control, *lower), sum_qubits[k - 1 - j])


def synth_sum_equals(
    layout: QubitLayout, names: Sequence[str], value: int, flag: int
) -> Circuit:
    """Flag-flip fragment for sum(names) == value.

    Accumulates every operand bit into the shared scratch register with
    controlled ripple increments, compares the accumulator against the
    constant onto the flag, then uncomputes so scratch returns to zero.
    """
    frag = Circuit(layout.num_qubits)
    sum_qubits = tuple(layout.scratch_qubits)
    accumulate = Circuit(layout.num_qubits)
    for name in names:
        vq = tuple(layout.var_qubits(name))
        width = len(vq)
        for i, q in enumerate(vq):
            _controlled_add_power(accumulate, q, width - 1 - i, sum_qubits)
    frag.extend(accumulate)
    k = len(sum_qubits)
    zero_positions = [
        q for j, q in enumerate(sum_qubits) if not (value >> (k - 1 - j)) & 1
    ]
    for q in zero_positions:
        frag.x(q)
    frag.mcx(sum_qubits, flag)
    for q in zero_positions:
        frag.x(q)
    frag.extend(inverse(accumulate))
    return frag


def _constraint_fragment(layout: QubitLayout, c: Constraint, flag: int) -> Circuit:
    if isinstance(c, NotEqual):
        return synth_not_equal(layout, c.a, c.b, flag)
    if isinstance(c, EqualConst):
        return synth_equal_const(layout, c.a, c.value, flag)
    return synth_sum_equals(layout, c.vars, c.value, flag)


# --- oracle, diffuser, schedule ---------------------------------------------


def build_oracle(problem: SatProblem, layout: QubitLayout) -> Circuit:
    """Phase oracle: -1 on search states satisfying every constraint, +1
    elsewhere, with all flags and scratch restored to zero.

    Compute every flag, phase-flip on the all-flags-set subspace, uncompute.
    With a single constraint the phase flip is a plain Z on its flag.
    """
    compute = Circuit(layout.num_qubits)
    for c, flag in zip(problem.constraints, layout.flag_qubits):
        compute.extend(_constraint_fragment(layout, c, flag))
    oracle = Circuit(layout.num_qubits)
    oracle.extend(compute)
    flags = layout.flag_qubits
    oracle.add(Z, controls=flags[:-1], targets=(flags[-1],))
    oracle.extend(inverse(compute))
    return oracle


def build_diffuser(search_width: int, num_qubits: int | None = None) -> Circuit:
    """Reflection about the uniform superposition of the search register
    (up to a global phase): H X on every search qubit, a search-wide
    controlled Z, then X H back."""
    if search_width < 1:
        raise ValueError(f"search register needs at least one qubit, got {search_width}")
    frag = Circuit(num_qubits or search_width)
    for q in range(search_width):
        frag.h(q)
    for q in range(search_width):
        frag.x(q)
    frag.add(Z, controls=tuple(range(search_width - 1)), targets=(search_width - 1,))
    for q in range(search_width):
        frag.x(q)
    for q in range(search_width):
        frag.h(q)
    return frag


def grover_iterations(num_qubits: int, num_solutions: int) -> int:
    """floor((pi/4) * sqrt(2**n / k)): the amplification optimum when the
    solution count k is known."""
    if num_qubits < 1:
        raise ValueError(f"need at least one qubit, got {num_qubits}")
    if not 1 <= num_solutions <= (1 << num_qubits):
        raise ValueError(
            f"solution count must be in 1..{1 << num_qubits}, got {num_solutions}"
        )
    return math.floor((math.pi / 4) * math.sqrt((1 << num_qubits) / num_solutions))


def iteration_schedule(search_width: int, max_steps: int | None = None) -> list[int]:
    """Iteration counts ceil(sqrt(2)**j) for j = 0, 1, ..., deduplicated and
    ascending, capped by the single-solution optimum ceil((pi/4)*sqrt(2**n)).

    Computed in exact integer arithmetic: for odd j the value is
    isqrt(2**j) + 1, exact because sqrt(2)**j is irrational there.
    """
    if search_width < 1:
        raise ValueError(f"search register needs at least one qubit, got {search_width}")
    cap = math.ceil((math.pi / 4) * math.sqrt(1 << search_width))
    steps: list[int] = []
    j = 0
    while True:
        if j % 2 == 0:
            t = 1 << (j // 2)
        else:
            t = math.isqrt(1 << j) + 1
        if t >= cap:
            break
        if not steps or t > steps[-1]:
            steps.append(t)
        j += 1
    steps.append(cap)
    if max_steps is not None:
        steps = steps[:max_steps]
    return steps


def _build_registers(layout: QubitLayout) -> tuple[QubitRegister, ...]:
    regs = [QubitRegister(name, offset, width) for name, offset, width in layout.var_ranges]
    used = {r.name for r in regs}

    def fresh(base: str) -> str:
        name = base
        while name in used:
            name = "_" + name
        used.add(name)
        return name

    if layout.flag_qubits:
        regs.append(QubitRegister(fresh("flags"), layout.flag_qubits[0], len(layout.flag_qubits)))
    if layout.scratch_width:
        regs.append(QubitRegister(fresh("scratch"), layout.scratch_offset, layout.scratch_width))
    return tuple(regs)


def build_search_circuit(
    problem: SatProblem, layout: QubitLayout, iterations: int
) -> Circuit:
    """Uniform state preparation on the search register followed by
    ``iterations`` oracle + diffuser rounds."""
    if iterations < 0:
        raise ValueError(f"iterations must be non-negative, got {iterations}")
    circ = Circuit(layout.num_qubits, registers=_build_registers(layout))
    for q in layout.search_qubits:
        circ.h(q)
    oracle = build_oracle(problem, layout)
    diffuser = build_diffuser(layout.search_width, layout.num_qubits)
    for _ in range(iterations):
        circ.extend(oracle)
        circ.extend(diffuser)
    return circ


# --- decode / encode ---------------------------------------------------------


def decode_bitstring(bits: str, problem: SatProblem) -> Assignment:
    """Split a search-register readout into per-variable integer values."""
    if len(bits) != problem.search_width or set(bits) - {"0", "1"}:
        raise ValueError(
            f"expected a {problem.search_width}-bit readout, got {bits!r}"
        )
    assignment: Assignment = {}
    pos = 0
    for v in problem.vars:
        assignment[v.name] = int(bits[pos : pos + v.bits], 2)
        pos += v.bits
    return assignment


def encode_assignment(assignment: Assignment, problem: SatProblem) -> str:
    """Inverse of :func:`decode_bitstring`."""
    parts = []
    for v in problem.vars:
        value = assignment[v.name]
        if not 0 <= value < (1 << v.bits):
            raise ValueError(
                f"value {value} outside the range of {v.name!r} (0..{(1 << v.bits) - 1})"
            )
        parts.append(format(value, f"0{v.bits}b"))
    return "".join(parts)


def decode(histogram: Histogram, problem: SatProblem) -> list[Assignment]:
    """Measured candidates by descending frequency, ties by bitstring."""
    return [decode_bitstring(bits, problem) for bits, _ in histogram.most_common()]


# --- solver -------------------------------------------------------------------


@dataclass
class GroverConfig:
    shots: int = 4096
    seed: int = 0
    # None means the unknown-solution-count default of 2 / 2**search_width
    frequency_threshold: float | None = None
    max_schedule_steps: int | None = None
    max_qubits: int = DEFAULT_QUBIT_CAP


@dataclass
class SolveReport:
    solutions: list[Assignment]
    iterations_used: int
    shots: int
    frequency_threshold: float
    histogram: Histogram
    # one (iterations, verified solution count) pair per schedule step run
    schedule_trace: list[tuple[int, int]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.solutions)


def solve(problem: SatProblem, config: GroverConfig | None = None) -> SolveReport:
    """Search with a growing iteration schedule.

    At each schedule step the circuit is rebuilt and run fresh with the same
    seed; measured bitstrings at or above the frequency threshold are decoded
    and kept only if they pass :func:`classical_check`.  The first step that
    yields any verified assignment wins.  An exhausted schedule returns an
    empty solution list: "no solution found" is a result, not an error.
    """
    config = config or GroverConfig()
    if config.shots < 1:
        raise ValueError(f"shots must be positive, got {config.shots}")
    layout = qubit_layout(problem, config.max_qubits)
    n = layout.search_width
    threshold = (
        config.frequency_threshold
        if config.frequency_threshold is not None
        else 2.0 / (1 << n)
    )
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"frequency threshold must be in (0, 1], got {threshold}")
    trace: list[tuple[int, int]] = []
    histogram: Histogram | None = None
    iterations_used = 0
    for iterations in iteration_schedule(n, config.max_schedule_steps):
        circuit = build_search_circuit(problem, layout, iterations)
        _, histogram = execute(
            circuit,
            shots=config.shots,
            seed=config.seed,
            measured_qubits=layout.search_qubits,
            cap=config.max_qubits,
        )
        assert histogram is not None
        verified: list[tuple[int, str, Assignment]] = []
        for bits, count in histogram.counts.items():
            if count / config.shots < threshold:
                continue
            assignment = decode_bitstring(bits, problem)
            if classical_check(assignment, problem):
                verified.append((count, bits, assignment))
        trace.append((iterations, len(verified)))
        iterations_used = iterations
        if verified:
            verified.sort(key=lambda item: (-item[0], item[1]))
            return SolveReport(
                solutions=[a for _, _, a in verified],
                iterations_used=iterations,
                shots=config.shots,
                frequency_threshold=threshold,
                histogram=histogram,
                schedule_trace=trace,
            )
    assert histogram is not None
    return SolveReport(
        solutions=[],
        iterations_used=iterations_used,
        shots=config.shots,
        frequency_threshold=threshold,
        histogram=histogram,
        schedule_trace=trace,
    )
