"""Reading and writing the OpenQASM 2.0 subset found in routing benchmarks.

Only a single quantum register is supported. One-qubit gates are kept as
opaque tokens (name plus the raw parameter text) so that a program written
back out is byte-identical in its gate lines. ``creg`` declarations and
``measure`` statements are buffered verbatim and re-emitted after the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = ["Gate", "QasmProgram", "QasmError", "parse_qasm", "write_qasm"]

HEADER = "OPENQASM 2.0;"
DEFAULT_INCLUDE = 'include "qelib1.inc";'

TWO_QUBIT_GATES = ("cx", "swap")


class QasmError(ValueError):
    """Raised for malformed or unsupported QASM input."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Gate:
    """One circuit instruction.

    ``name`` is ``"cx"``, ``"swap"``, ``"h"`` or any other one-qubit gate
    name. ``params`` holds the text between the parentheses, untouched.
    ``id`` is the position in the source program (``-1`` for gates
    inserted by the router).
    """

    name: str
    qubits: tuple[int, ...]
    params: str | None = None
    id: int = -1

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def same_op(self, other: "Gate") -> bool:
        return (self.name, self.qubits, self.params) == (other.name, other.qubits, other.params)

    def to_qasm(self, reg: str = "q") -> str:
        head = self.name if self.params is None else f"{self.name}({self.params})"
        args = ",".join(f"{reg}[{q}]" for q in self.qubits)
        return f"{head} {args};"


@dataclass
class QasmProgram:
    qreg_name: str
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    includes: list[str] = field(default_factory=lambda: [DEFAULT_INCLUDE])
    cregs: list[str] = field(default_factory=list)
    measures: list[str] = field(default_factory=list)

    @property
    def qreg_sizes(self) -> dict[str, int]:
        return {self.qreg_name: self.n_qubits}

    def cnots(self) -> list[Gate]:
        return [g for g in self.gates if g.is_two_qubit]

    def active_qubits(self) -> list[int]:
        """Qubits touched by some gate or measurement, ascending."""
        used = {q for g in self.gates for q in g.qubits}
        used.update(q for q, _ in (parse_measure(m, self.qreg_name) for m in self.measures))
        return sorted(used)

    def structurally_equal(self, other: "QasmProgram") -> bool:
        return (
            self.n_qubits == other.n_qubits
            and self.qreg_name == other.qreg_name
            and len(self.gates) == len(other.gates)
            and all(a.same_op(b) for a, b in zip(self.gates, other.gates))
            and self.cregs == other.cregs
            and self.measures == other.measures
        )


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_RE_VERSION = re.compile(r"OPENQASM\s+(\d+)\.(\d+)$")
_RE_INCLUDE = re.compile(r'include\s+"[^"]*"$')
_RE_REG = re.compile(rf"(qreg|creg)\s+({_IDENT})\s*\[\s*(\d+)\s*\]$")
_RE_MEASURE = re.compile(rf"measure\s+({_IDENT})\s*\[\s*(\d+)\s*\]\s*->\s*({_IDENT})\s*\[\s*(\d+)\s*\]$")
_RE_GATE = re.compile(rf"({_IDENT})\s*(?:\((.*)\))?\s+(.+)$", re.S)
_RE_ARG = re.compile(rf"({_IDENT})\s*\[\s*(\d+)\s*\]$")


def parse_measure(stmt: str, reg: str) -> tuple[int, str]:
    m = _RE_MEASURE.match(stmt.rstrip(";").strip())
    if not m or m.group(1) != reg:
        raise QasmError(f"bad measure statement {stmt!r}")
    return int(m.group(2)), f"{m.group(3)}[{m.group(4)}]"


def _strip_comments(text: str) -> str:
    # keep offsets stable so line/column reports stay correct
    return re.sub(r"//[^\n]*", lambda m: " " * len(m.group(0)), text)


def _statements(text: str):
    """Yield (statement, line, column) for each ``;``-terminated statement."""
    text = _strip_comments(text)
    start = 0
    for i, ch in enumerate(text):
        if ch == ";":
            raw = text[start:i]
            stripped = raw.lstrip()
            offset = start + len(raw) - len(stripped)
            line = text.count("\n", 0, offset) + 1
            col = offset - (text.rfind("\n", 0, offset) + 1) + 1
            if stripped.strip():
                yield stripped.strip(), line, col
            start = i + 1
    tail = text[start:].strip()
    if tail:
        offset = text.index(tail, start)
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        raise QasmError("statement not terminated by ';'", line, col)


def parse_qasm(text: str) -> QasmProgram:
    """Parse OpenQASM 2.0 text into a :class:`QasmProgram`."""
    qreg: tuple[str, int] | None = None
    includes: list[str] = []
    cregs: list[str] = []
    measures: list[str] = []
    gates: list[Gate] = []

    for stmt, line, col in _statements(text):
        keyword = stmt.split(None, 1)[0] if stmt[0].isalpha() else stmt
        if keyword == "OPENQASM":
            m = _RE_VERSION.match(stmt)
            if not m or m.group(1) != "2":
                raise QasmError(f"unsupported version header {stmt!r}", line, col)
            continue
        if keyword == "include":
            if not _RE_INCLUDE.match(stmt):
                raise QasmError(f"malformed include {stmt!r}", line, col)
            includes.append(stmt + ";")
            continue
        if keyword in ("qreg", "creg"):
            m = _RE_REG.match(stmt)
            if not m:
                raise QasmError(f"malformed register declaration {stmt!r}", line, col)
            if keyword == "creg":
                cregs.append(stmt + ";")
            elif qreg is not None:
                raise QasmError("only a single quantum register is supported", line, col)
            else:
                qreg = (m.group(2), int(m.group(3)))
            continue
        if keyword == "barrier":
            continue
        if keyword == "measure":
            if qreg is None:
                raise QasmError("measure before qreg declaration", line, col)
            m = _RE_MEASURE.match(stmt)
            if not m:
                raise QasmError(f"malformed measure {stmt!r}", line, col)
            if m.group(1) != qreg[0] or int(m.group(2)) >= qreg[1]:
                raise QasmError(f"measure operand out of range in {stmt!r}", line, col)
            measures.append(stmt + ";")
            continue
        if keyword in ("gate", "opaque", "if", "reset"):
            raise QasmError(f"unsupported statement {keyword!r}", line, col)

        m = _RE_GATE.match(stmt)
        if not m:
            raise QasmError(f"syntax error in {stmt!r}", line, col)
        if qreg is None:
            raise QasmError("gate before qreg declaration", line, col)
        name, params, argtext = m.group(1), m.group(2), m.group(3)
        qubits = []
        for arg in argtext.split(","):
            am = _RE_ARG.match(arg.strip())
            if not am:
                raise QasmError(f"bad operand {arg.strip()!r}", line, col)
            if am.group(1) != qreg[0]:
                raise QasmError(f"unknown register {am.group(1)!r}", line, col)
            idx = int(am.group(2))
            if idx >= qreg[1]:
                raise QasmError(f"qubit index {idx} out of range for {qreg[0]}[{qreg[1]}]", line, col)
            qubits.append(idx)
        if len(qubits) > 2:
            raise QasmError(f"{len(qubits)}-operand gate {name!r} not supported", line, col)
        if len(qubits) == 2:
            if name not in TWO_QUBIT_GATES:
                raise QasmError(f"unsupported two-qubit gate {name!r}", line, col)
            if qubits[0] == qubits[1]:
                raise QasmError(f"duplicate operands in {stmt!r}", line, col)
        elif name in TWO_QUBIT_GATES:
            raise QasmError(f"{name!r} needs two operands", line, col)
        gates.append(Gate(name, tuple(qubits), params.strip() if params is not None else None, len(gates)))

    if qreg is None:
        raise QasmError("no qreg declaration")
    return QasmProgram(qreg[0], qreg[1], gates, includes or [DEFAULT_INCLUDE], cregs, measures)


def write_qasm(prog: QasmProgram) -> str:
    lines = [HEADER, *prog.includes, f"qreg {prog.qreg_name}[{prog.n_qubits}];", *prog.cregs]
    lines.extend(g.to_qasm(prog.qreg_name) for g in prog.gates)
    lines.extend(prog.measures)
    return "\n".join(lines) + "\n"


def read_qasm_file(path) -> QasmProgram:
    with open(path, encoding="utf-8") as fh:
        return parse_qasm(fh.read())
