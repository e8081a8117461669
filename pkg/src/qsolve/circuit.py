"""Circuit representation: named registers, an ordered gate list, structural
inversion, a Fourier-transform builder, execution, and a line-oriented text
format that round-trips exactly."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CircuitFormatError
from .statevector import (
    DEFAULT_QUBIT_CAP,
    Gate,
    H,
    Histogram,
    SWAP,
    StateVector,
    X,
    Z,
    apply_gate_in_place,
    check_operands,
    init_zero,
    phase,
    sample,
)


@dataclass(frozen=True)
class QubitRegister:
    """A named contiguous block of qubits."""

    name: str
    offset: int
    width: int

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z_]\w*", self.name):
            raise ValueError(f"register name {self.name!r} is not an identifier")
        if self.offset < 0 or self.width < 1:
            raise ValueError(f"bad register extent: offset={self.offset} width={self.width}")

    @property
    def qubits(self) -> range:
        return range(self.offset, self.offset + self.width)


@dataclass(frozen=True)
class CircuitOp:
    """One gate application; controls are unordered, targets ordered."""

    gate: Gate
    controls: frozenset[int] = frozenset()
    targets: tuple[int, ...] = ()

    def inverse(self) -> "CircuitOp":
        return CircuitOp(self.gate.inverse(), self.controls, self.targets)


@dataclass
class Circuit:
    """An ordered list of operations on ``num_qubits`` qubits.

    Equality is structural: same width, same registers, same op sequence.
    The builder methods validate each op as it is added and return ``self``
    so constructions chain.
    """

    num_qubits: int
    registers: tuple[QubitRegister, ...] = ()
    ops: list[CircuitOp] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got {self.num_qubits}")
        self.registers = tuple(self.registers)
        names = set()
        claimed: set[int] = set()
        for reg in self.registers:
            if reg.name in names:
                raise ValueError(f"duplicate register name {reg.name!r}")
            names.add(reg.name)
            for q in reg.qubits:
                if q >= self.num_qubits:
                    raise ValueError(
                        f"register {reg.name!r} extends past qubit {self.num_qubits - 1}"
                    )
                if q in claimed:
                    raise ValueError(f"register {reg.name!r} overlaps qubit {q}")
                claimed.add(q)
        self.ops = list(self.ops)
        for op in self.ops:
            check_operands(self.num_qubits, op.gate, op.controls, op.targets)

    def register(self, name: str) -> QubitRegister:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(f"no register named {name!r}")

    def append(self, op: CircuitOp) -> "Circuit":
        check_operands(self.num_qubits, op.gate, op.controls, op.targets)
        self.ops.append(op)
        return self

    def add(
        self,
        gate: Gate,
        controls: Iterable[int] = (),
        targets: Iterable[int] = (),
    ) -> "Circuit":
        controls, targets = check_operands(self.num_qubits, gate, controls, targets)
        self.ops.append(CircuitOp(gate, controls, targets))
        return self

    def extend(self, fragment: "Circuit") -> "Circuit":
        """Append another circuit's ops; widths need not match, ops must fit."""
        for op in fragment.ops:
            self.append(op)
        return self

    # --- single-gate sugar -------------------------------------------------

    def h(self, qubit: int) -> "Circuit":
        return self.add(H, targets=(qubit,))

    def x(self, qubit: int) -> "Circuit":
        return self.add(X, targets=(qubit,))

    def z(self, qubit: int) -> "Circuit":
        return self.add(Z, targets=(qubit,))

    def swap(self, a: int, b: int) -> "Circuit":
        return self.add(SWAP, targets=(a, b))

    def cx(self, control: int, target: int) -> "Circuit":
        return self.add(X, controls=(control,), targets=(target,))

    def mcx(self, controls: Iterable[int], target: int) -> "Circuit":
        return self.add(X, controls=controls, targets=(target,))

    def mcz(self, controls: Iterable[int], target: int) -> "Circuit":
        return self.add(Z, controls=controls, targets=(target,))

    def phase_on(
        self, lam: float, qubit: int, controls: Iterable[int] = ()
    ) -> "Circuit":
        return self.add(phase(lam), controls=controls, targets=(qubit,))


def inverse(circuit: Circuit) -> Circuit:
    """The exact inverse: each op inverted, order reversed."""
    return Circuit(
        circuit.num_qubits,
        circuit.registers,
        [op.inverse() for op in reversed(circuit.ops)],
    )


def build_qft(qubits: Sequence[int]) -> Circuit:
    """Fourier transform over ``qubits``: basis input j maps to amplitudes
    exp(2*pi*i*j*l / 2**m) / sqrt(2**m) at index l.

    The trailing swap layer is included, so with the first listed qubit as
    the most significant bit the output reads in the same order as input.
    """
    qs = tuple(int(q) for q in qubits)
    if not qs:
        raise ValueError("need at least one qubit")
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubits in {qs}")
    m = len(qs)
    frag = Circuit(max(qs) + 1)
    for i in range(m):
        frag.h(qs[i])
        for j in range(i + 1, m):
            frag.phase_on(math.pi / 2 ** (j - i), qs[i], controls=(qs[j],))
    for i in range(m // 2):
        frag.swap(qs[i], qs[m - 1 - i])
    return frag


def execute(
    circuit: Circuit,
    shots: int = 0,
    seed: int = 0,
    measured_qubits: Sequence[int] | None = None,
    cap: int = DEFAULT_QUBIT_CAP,
) -> tuple[StateVector, Histogram | None]:
    """Run the circuit from the all-zeros state.

    shots=0 skips sampling entirely (the seed is never consumed) and
    returns ``(state, None)``; otherwise the histogram covers
    ``measured_qubits`` (default: all qubits in order).
    """
    if shots < 0:
        raise ValueError(f"shots must be non-negative, got {shots}")
    state = init_zero(circuit.num_qubits, cap=cap)
    for op in circuit.ops:
        apply_gate_in_place(state, op.gate, op.controls, op.targets)
    if shots == 0:
        return state, None
    if measured_qubits is None:
        measured_qubits = range(circuit.num_qubits)
    return state, sample(state, shots, seed, measured_qubits)


# --- text serialization ----------------------------------------------------

_FORMAT_HEADER = "qsolve-circuit v1"

_OP_RE = re.compile(
    r"(?P<kind>[a-z]+)(?:\((?P<lam>[^)]*)\))?"
    r" controls=\[(?P<controls>[^\]]*)\] targets=\[(?P<targets>[^\]]*)\]"
)


def export_text(circuit: Circuit) -> str:
    """Render a circuit in the v1 text format.

    One header line, one line per register, then one line per op in order.
    Phase angles are written with ``repr`` so parsing returns the identical
    float and export/parse round-trips exactly.
    """
    lines = [f"{_FORMAT_HEADER} qubits={circuit.num_qubits}"]
    for reg in circuit.registers:
        lines.append(f"register {reg.name} {reg.offset} {reg.width}")
    for op in circuit.ops:
        kind = op.gate.name
        if kind == "phase":
            kind = f"phase({op.gate.lam!r})"
        ctrl = ",".join(str(q) for q in sorted(op.controls))
        tgt = ",".join(str(q) for q in op.targets)
        lines.append(f"{kind} controls=[{ctrl}] targets=[{tgt}]")
    return "\n".join(lines) + "\n"


def _parse_int_list(text: str, lineno: int) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise CircuitFormatError(f"line {lineno}: bad qubit list [{text}]") from exc


def parse_text(text: str) -> Circuit:
    """Parse the v1 text format back into a circuit."""
    lines = [ln for ln in text.splitlines()]
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not body:
        raise CircuitFormatError("empty circuit text")
    lineno, header = body[0]
    match = re.fullmatch(re.escape(_FORMAT_HEADER) + r" qubits=(\d+)", header)
    if not match:
        raise CircuitFormatError(f"line {lineno}: bad header {header!r}")
    circuit = Circuit(int(match.group(1)))
    registers: list[QubitRegister] = []
    in_registers = True
    for lineno, line in body[1:]:
        if line.startswith("register "):
            if not in_registers:
                raise CircuitFormatError(
                    f"line {lineno}: register lines must precede op lines"
                )
            parts = line.split()
            if len(parts) != 4:
                raise CircuitFormatError(f"line {lineno}: bad register line {line!r}")
            try:
                reg = QubitRegister(parts[1], int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise CircuitFormatError(f"line {lineno}: {exc}") from exc
            registers.append(reg)
            continue
        if in_registers:
            in_registers = False
            try:
                circuit = Circuit(circuit.num_qubits, tuple(registers))
            except ValueError as exc:
                raise CircuitFormatError(f"line {lineno}: {exc}") from exc
        match = _OP_RE.fullmatch(line)
        if not match:
            raise CircuitFormatError(f"line {lineno}: bad op line {line!r}")
        kind = match.group("kind")
        lam_text = match.group("lam")
        try:
            if kind == "phase":
                if lam_text is None:
                    raise ValueError("phase needs an angle")
                gate = phase(float(lam_text))
            elif lam_text is not None:
                raise ValueError(f"gate {kind!r} takes no angle")
            else:
                gate = Gate(kind)
            circuit.add(
                gate,
                controls=_parse_int_list(match.group("controls"), lineno),
                targets=_parse_int_list(match.group("targets"), lineno),
            )
        except ValueError as exc:
            raise CircuitFormatError(f"line {lineno}: {exc}") from exc
    if in_registers:
        circuit = Circuit(circuit.num_qubits, tuple(registers))
    return circuit
