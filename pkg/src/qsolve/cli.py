"""Command-line frontend: JSON problem files in, solutions out.

Exit codes: 0 = solved, 1 = search exhausted with no verified solution,
2 = anything wrong with the invocation or the problem file.  Errors are
reported as one-line diagnostics on stderr, never as tracebacks.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .circuit import export_text
from .errors import AlgorithmMismatchError, ProblemFileError, QsolveError
from .grover_sat import (
    EqualConst,
    GroverConfig,
    NotEqual,
    SatProblem,
    SumEquals,
    VarDecl,
    build_search_circuit,
    qubit_layout,
    validate_problem,
)
from .grover_sat import solve as grover_solve
from .qpe_tsp import (
    TspConfig,
    TspInstance,
    build_phase_unitary,
    display_tour,
    encode_eigenstate,
    qpe_circuit,
    validate_instance,
)
from .qpe_tsp import solve as tsp_solve
from .statevector import DEFAULT_QUBIT_CAP


class UsageError(QsolveError):
    """Bad option values; maps to exit code 2."""


# --- problem file parsing ------------------------------------------------------


@dataclass
class ParsedProblem:
    kind: str  # "sat" or "tsp"
    sat: SatProblem | None = None
    tsp: TspInstance | None = None


def _type_name(value) -> str:
    return type(value).__name__


def _get(obj: dict, key: str, where: str):
    if key not in obj:
        raise ProblemFileError(f"{where}: missing required field {key!r}")
    return obj[key]


def _as_object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ProblemFileError(f"{where}: expected an object, got {_type_name(value)}")
    return value


def _as_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ProblemFileError(f"{where}: expected an array, got {_type_name(value)}")
    return value


def _as_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise ProblemFileError(f"{where}: expected a string, got {_type_name(value)}")
    return value


def _as_int(value, where: str) -> int:
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(f"{where}: expected an integer, got {_type_name(value)}")
    return value


def _parse_constraint(raw, where: str):
    obj = _as_object(raw, where)
    kind = _as_str(_get(obj, "kind", where), f"{where}.kind")
    raw_args = _as_list(_get(obj, "args", where), f"{where}.args")
    args = [_as_str(a, f"{where}.args[{k}]") for k, a in enumerate(raw_args)]
    if kind == "not_equal":
        if len(args) != 2:
            raise ProblemFileError(f"{where}: not_equal takes exactly 2 args, got {len(args)}")
        if "value" in obj:
            raise ProblemFileError(f"{where}: not_equal takes no 'value' field")
        return NotEqual(args[0], args[1])
    if kind == "equal_const":
        if len(args) != 1:
            raise ProblemFileError(f"{where}: equal_const takes exactly 1 arg, got {len(args)}")
        return EqualConst(args[0], _as_int(_get(obj, "value", where), f"{where}.value"))
    if kind == "sum_equals":
        if not args:
            raise ProblemFileError(f"{where}: sum_equals needs at least 1 arg")
        return SumEquals(tuple(args), _as_int(_get(obj, "value", where), f"{where}.value"))
    raise ProblemFileError(
        f"{where}: unknown constraint kind {kind!r} "
        "(expected not_equal, equal_const or sum_equals)"
    )


def parse_problem(path) -> ParsedProblem:
    """Read and validate a problem file; any defect raises ProblemFileError
    with a message locating the offending element."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
        ) from exc
    where = str(path)
    obj = _as_object(data, where)
    kind = _as_str(_get(obj, "type", where), f"{where}.type")

    if kind == "sat":
        decls = []
        for i, raw in enumerate(_as_list(_get(obj, "variables", where), f"{where}.variables")):
            vwhere = f"{where}.variables[{i}]"
            vobj = _as_object(raw, vwhere)
            decls.append(
                VarDecl(
                    _as_str(_get(vobj, "name", vwhere), f"{vwhere}.name"),
                    _as_int(_get(vobj, "bits", vwhere), f"{vwhere}.bits"),
                )
            )
        constraints = tuple(
            _parse_constraint(raw, f"{where}.constraints[{i}]")
            for i, raw in enumerate(
                _as_list(_get(obj, "constraints", where), f"{where}.constraints")
            )
        )
        problem = SatProblem(tuple(decls), constraints)
        diags = validate_problem(problem)
        if diags:
            raise ProblemFileError("\n".join(f"{where}: {d}" for d in diags))
        return ParsedProblem("sat", sat=problem)

    if kind == "tsp":
        rows = []
        for i, raw in enumerate(_as_list(_get(obj, "adjacency", where), f"{where}.adjacency")):
            rwhere = f"{where}.adjacency[{i}]"
            rows.append(
                tuple(
                    _as_int(x, f"{rwhere}[{k}]")
                    for k, x in enumerate(_as_list(raw, rwhere))
                )
            )
        instance = TspInstance(tuple(rows))
        diags = validate_instance(instance)
        if diags:
            raise ProblemFileError("\n".join(f"{where}: {d}" for d in diags))
        return ParsedProblem("tsp", tsp=instance)

    raise ProblemFileError(
        f"{where}.type: unknown problem type {kind!r} (expected 'sat' or 'tsp')"
    )


_COMPATIBLE = {"sat": "grover", "tsp": "qpe"}


def select_algorithm(problem_kind: str, requested: str = "auto") -> str:
    compatible = _COMPATIBLE[problem_kind]
    if requested in ("auto", compatible):
        return compatible
    raise AlgorithmMismatchError(
        f"algorithm {requested!r} cannot solve a {problem_kind!r} problem; "
        f"use {compatible!r} or 'auto'"
    )


# --- report rendering ----------------------------------------------------------

SAT_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "problem_type",
        "algorithm",
        "found",
        "solutions",
        "iterations_used",
        "shots",
        "frequency_threshold",
        "schedule_trace",
        "histogram",
    ],
    "properties": {
        "problem_type": {"const": "sat"},
        "algorithm": {"const": "grover"},
        "found": {"type": "boolean"},
        "solutions": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": {"type": "integer", "minimum": 0},
            },
        },
        "iterations_used": {"type": "integer", "minimum": 0},
        "shots": {"type": "integer", "minimum": 1},
        "frequency_threshold": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "schedule_trace": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "histogram": {
            "type": "object",
            "propertyNames": {"pattern": "^[01]+$"},
            "additionalProperties": {"type": "integer", "minimum": 1},
        },
    },
    "additionalProperties": False,
}

TSP_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "problem_type",
        "algorithm",
        "best_tour",
        "best_tour_display",
        "best_length",
        "precision_bits",
        "scale",
        "per_cycle",
    ],
    "properties": {
        "problem_type": {"const": "tsp"},
        "algorithm": {"const": "qpe"},
        "best_tour": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "best_tour_display": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "best_length": {"type": "integer", "minimum": 0},
        "precision_bits": {"type": "integer", "minimum": 1},
        "scale": {"type": "integer", "minimum": 2},
        "per_cycle": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tour", "length", "raw", "phase", "probability"],
                "properties": {
                    "tour": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "length": {"type": "integer", "minimum": 0},
                    "raw": {"type": "integer", "minimum": 0},
                    "phase": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                    "probability": {"type": "number", "minimum": 0, "maximum": 1},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def sat_report_json(problem: SatProblem, report) -> dict:
    return {
        "problem_type": "sat",
        "algorithm": "grover",
        "found": report.found,
        "solutions": [
            {v.name: assignment[v.name] for v in problem.vars}
            for assignment in report.solutions
        ],
        "iterations_used": report.iterations_used,
        "shots": report.shots,
        "frequency_threshold": report.frequency_threshold,
        "schedule_trace": [[t, k] for t, k in report.schedule_trace],
        "histogram": dict(report.histogram.counts),
    }


def tsp_report_json(report) -> dict:
    return {
        "problem_type": "tsp",
        "algorithm": "qpe",
        "best_tour": list(report.best_tour),
        "best_tour_display": list(display_tour(report.best_tour)),
        "best_length": report.best_length,
        "precision_bits": report.precision_bits,
        "scale": report.scale,
        "per_cycle": [
            {
                "tour": list(r.tour),
                "length": r.length,
                "raw": r.estimate.raw,
                "phase": r.estimate.phase,
                "probability": r.estimate.probability,
            }
            for r in report.per_cycle
        ],
    }


def _emit_json(payload: dict, out) -> None:
    json.dump(payload, out, indent=2)
    out.write("\n")


def _render_sat_text(problem: SatProblem, report, out) -> None:
    if not report.found:
        out.write("no solution found\n")
        return
    blocks = [
        "\n".join(f"{v.name} = {assignment[v.name]}" for v in problem.vars)
        for assignment in report.solutions
    ]
    out.write("\n\n".join(blocks) + "\n")


def _render_tsp_text(report, out) -> None:
    out.write(f"{list(display_tour(report.best_tour))} length {report.best_length}\n")


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsolve",
        description="Solve constraint and travelling-salesman problems "
        "on a built-in statevector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    cmd = sub.add_parser("solve", help="solve a JSON problem file")
    cmd.add_argument("--input", required=True, help="path to the problem file")
    cmd.add_argument("--algorithm", choices=("auto", "grover", "qpe"), default="auto")
    cmd.add_argument("--shots", type=int, default=4096, help="measurement shots per run")
    cmd.add_argument("--seed", type=int, default=0, help="sampling seed")
    cmd.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="candidate frequency threshold for the search solver (default 2/2^n)",
    )
    cmd.add_argument("--output", choices=("text", "json"), default="text")
    cmd.add_argument(
        "--dump-circuit",
        metavar="PATH",
        default=None,
        help="also write the final circuit in text form to PATH",
    )
    cmd.add_argument("--max-qubits", type=int, default=DEFAULT_QUBIT_CAP)
    return parser


def _run_solve(args) -> int:
    if args.shots < 1:
        raise UsageError(f"--shots must be positive, got {args.shots}")
    if args.max_qubits < 1:
        raise UsageError(f"--max-qubits must be positive, got {args.max_qubits}")
    if args.threshold is not None and not 0.0 < args.threshold <= 1.0:
        raise UsageError(f"--threshold must be in (0, 1], got {args.threshold}")
    parsed = parse_problem(args.input)
    algorithm = select_algorithm(parsed.kind, args.algorithm)

    if algorithm == "grover":
        assert parsed.sat is not None
        config = GroverConfig(
            shots=args.shots,
            seed=args.seed,
            frequency_threshold=args.threshold,
            max_qubits=args.max_qubits,
        )
        report = grover_solve(parsed.sat, config)
        if args.dump_circuit:
            layout = qubit_layout(parsed.sat, args.max_qubits)
            circuit = build_search_circuit(parsed.sat, layout, report.iterations_used)
            Path(args.dump_circuit).write_text(export_text(circuit))
        if args.output == "json":
            _emit_json(sat_report_json(parsed.sat, report), sys.stdout)
        else:
            _render_sat_text(parsed.sat, report, sys.stdout)
        return 0 if report.found else 1

    assert parsed.tsp is not None
    config = TspConfig(
        shots_per_cycle=args.shots, seed=args.seed, max_qubits=args.max_qubits
    )
    report = tsp_solve(parsed.tsp, config)
    if args.dump_circuit:
        unitary = build_phase_unitary(parsed.tsp, report.scale)
        eigenstate = encode_eigenstate(report.best_tour, parsed.tsp.n_nodes)
        circuit = qpe_circuit(unitary, eigenstate, report.precision_bits)
        Path(args.dump_circuit).write_text(export_text(circuit))
    if args.output == "json":
        _emit_json(tsp_report_json(report), sys.stdout)
    else:
        _render_tsp_text(report, sys.stdout)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run_solve(args)
    except (QsolveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
