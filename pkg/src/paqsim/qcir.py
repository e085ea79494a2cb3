"""Parsers and serializers for the .qc circuit and .qtl timeline formats.

Both formats are flat and line-oriented: '#' starts a comment, tokens
are whitespace-separated, gate names are case-insensitive, angles are in
degrees. Parse errors carry the 1-based line and column of the
offending token and never return a partial program.

.qc grammar:
    qubits <n>
    h <q> | p <q> | x90 <q> | qwp <q> <angle> | hwp <q> <angle>
    cp <c> <t> | cnot <c> <t>

.qtl grammar:
    qms <n>
    pos <i> <x> [y]            # micrometers, y defaults to 0
    step:
        pmu <i> <qwp|hwp> <angle>
        cp <i> <j>             # pairs of one step share no memory

Blockade reach for cp pairs is checked at run time with an inclusive
(<=) comparison on center-to-center distance.
"""

from __future__ import annotations

import re

from .errors import ConfigError, ParseError
from .gates import CircuitIR, CircuitOp
from .timeline import PlateOp, TimelineProgram, TimelineStep

_TOKEN = re.compile(r"\S+")


def _token_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            yield lineno, tokens


def _need(tokens, count, line, form):
    if len(tokens) != count:
        tok, col = tokens[min(count, len(tokens) - 1)]
        raise ParseError(f"expected `{form}`", line, col)


def _int(tok, col, line, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line, col) from None


def _float(tok, col, line, what):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"{what} must be a number, got {tok!r}", line, col) from None


def _index(tok, col, line, n, what):
    q = _int(tok, col, line, what)
    if not 0 <= q < n:
        raise ParseError(f"{what} {q} out of range (have {n})", line, col)
    return q


def parse_circuit(text: str) -> CircuitIR:
    lines = _token_lines(text)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing `qubits <n>` header", 1, 1) from None
    if tokens[0][0].lower() != "qubits":
        raise ParseError("first statement must be `qubits <n>`", lineno, tokens[0][1])
    _need(tokens, 2, lineno, "qubits <n>")
    n = _int(tokens[1][0], tokens[1][1], lineno, "qubit count")
    if n < 1:
        raise ParseError(f"qubit count must be >= 1, got {n}", lineno, tokens[1][1])

    ops: list[CircuitOp] = []
    for lineno, tokens in lines:
        name, col = tokens[0][0].lower(), tokens[0][1]
        if name in ("h", "p", "x90"):
            _need(tokens, 2, lineno, f"{name} <q>")
            q = _index(tokens[1][0], tokens[1][1], lineno, n, "qubit index")
            ops.append(CircuitOp(name, (q,)))
        elif name in ("qwp", "hwp"):
            _need(tokens, 3, lineno, f"{name} <q> <angle>")
            q = _index(tokens[1][0], tokens[1][1], lineno, n, "qubit index")
            angle = _float(tokens[2][0], tokens[2][1], lineno, "angle")
            ops.append(CircuitOp(name, (q,), angle_deg=angle))
        elif name in ("cp", "cnot"):
            _need(tokens, 3, lineno, f"{name} <control> <target>")
            a = _index(tokens[1][0], tokens[1][1], lineno, n, "qubit index")
            b = _index(tokens[2][0], tokens[2][1], lineno, n, "qubit index")
            if a == b:
                raise ParseError(
                    f"{name} needs two distinct qubits", lineno, tokens[2][1]
                )
            ops.append(CircuitOp(name, (a, b)))
        else:
            raise ParseError(f"unknown gate {name!r}", lineno, col)
    return CircuitIR(n, tuple(ops))


def serialize_circuit(circuit: CircuitIR) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for op in circuit.ops:
        if op.kind in ("h", "p", "x90"):
            lines.append(f"{op.kind} {op.targets[0]}")
        elif op.kind in ("qwp", "hwp"):
            lines.append(f"{op.kind} {op.targets[0]} {op.angle_deg:.17g}")
        elif op.kind in ("cp", "cnot"):
            lines.append(f"{op.kind} {op.targets[0]} {op.targets[1]}")
        else:
            raise ConfigError(f"{op.kind} ops have no text form")
    return "\n".join(lines) + "\n"


def parse_timeline(text: str) -> TimelineProgram:
    lines = _token_lines(text)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing `qms <n>` header", 1, 1) from None
    if tokens[0][0].lower() != "qms":
        raise ParseError("first statement must be `qms <n>`", lineno, tokens[0][1])
    _need(tokens, 2, lineno, "qms <n>")
    n = _int(tokens[1][0], tokens[1][1], lineno, "memory count")
    if n < 1:
        raise ParseError(f"memory count must be >= 1, got {n}", lineno, tokens[1][1])

    positions: dict[int, tuple[float, float]] = {}
    steps: list[TimelineStep] = []
    pmu: list[tuple[int, PlateOp]] = []
    cps: list[tuple[int, int]] = []
    used: set[int] = set()
    in_step = False

    def flush():
        if in_step:
            steps.append(TimelineStep(tuple(pmu), tuple(cps)))
            pmu.clear()
            cps.clear()
            used.clear()

    for lineno, tokens in lines:
        name, col = tokens[0][0].lower(), tokens[0][1]
        if name == "pos":
            if in_step:
                raise ParseError("pos must come before the first step", lineno, col)
            if len(tokens) not in (3, 4):
                raise ParseError("expected `pos <i> <x> [y]`", lineno, col)
            i = _index(tokens[1][0], tokens[1][1], lineno, n, "memory index")
            if i in positions:
                raise ParseError(f"position of memory {i} set twice", lineno, tokens[1][1])
            x = _float(tokens[2][0], tokens[2][1], lineno, "x coordinate")
            y = 0.0
            if len(tokens) == 4:
                y = _float(tokens[3][0], tokens[3][1], lineno, "y coordinate")
            positions[i] = (x, y)
        elif name == "step:":
            flush()
            in_step = True
        elif name == "pmu":
            if not in_step:
                raise ParseError("pmu outside a step block", lineno, col)
            _need(tokens, 4, lineno, "pmu <i> <qwp|hwp> <angle>")
            i = _index(tokens[1][0], tokens[1][1], lineno, n, "memory index")
            plate = tokens[2][0].lower()
            if plate not in ("qwp", "hwp"):
                raise ParseError(
                    f"unknown wave plate {plate!r}", lineno, tokens[2][1]
                )
            angle = _float(tokens[3][0], tokens[3][1], lineno, "angle")
            pmu.append((i, PlateOp(plate, angle)))
        elif name == "cp":
            if not in_step:
                raise ParseError("cp outside a step block", lineno, col)
            _need(tokens, 3, lineno, "cp <i> <j>")
            a = _index(tokens[1][0], tokens[1][1], lineno, n, "memory index")
            b = _index(tokens[2][0], tokens[2][1], lineno, n, "memory index")
            if a == b:
                raise ParseError("cp needs two distinct memories", lineno, tokens[2][1])
            if a in used or b in used:
                raise ParseError(
                    f"memory {a if a in used else b} already used by a cp "
                    "pair in this step", lineno, col,
                )
            used.update((a, b))
            cps.append((a, b))
        else:
            raise ParseError(f"unknown statement {name!r}", lineno, col)
    flush()

    pos = tuple(positions.get(i, (0.0, 0.0)) for i in range(n))
    return TimelineProgram(n, pos, tuple(steps))


def serialize_timeline(program: TimelineProgram) -> str:
    lines = [f"qms {program.n_qms}"]
    for i, (x, y) in enumerate(program.positions):
        lines.append(f"pos {i} {x:.17g} {y:.17g}")
    for step in program.steps:
        lines.append("step:")
        for q, plate in step.pmu_ops:
            lines.append(f"pmu {q} {plate.kind} {plate.angle_deg:.17g}")
        for a, b in step.cp_pairs:
            lines.append(f"cp {a} {b}")
    return "\n".join(lines) + "\n"
