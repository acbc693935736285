"""Turn a routing result into a physical circuit."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from tabumap.circuit import LayeredCircuit, circuit_depth
from tabumap.coupling import CouplingGraph
from tabumap.mapping import Mapping
from tabumap.qasm import Gate, QasmProgram
from tabumap.router import RouteResult

__all__ = ["Segment", "RoutedResult", "decompose_swap", "fix_direction", "assemble_output"]


@dataclass(frozen=True)
class Segment:
    """A run of inserted or rewritten gates in the output body.

    ``kind`` is ``"swap"`` (a decomposed SWAP on ``edge``) or ``"reversed"``
    (a CNOT run against the device direction, wrapped in Hadamards).
    """

    start: int
    length: int
    kind: str
    edge: tuple[int, int]


@dataclass
class RoutedResult:
    initial_mapping: Mapping
    final_mapping: Mapping
    body: list[Gate]
    segments: list[Segment]
    stats: dict = field(default_factory=dict)


def _cx(a: int, b: int) -> Gate:
    return Gate("cx", (a, b))


def _h(a: int) -> Gate:
    return Gate("h", (a,))


def decompose_swap(edge: tuple[int, int], cg: CouplingGraph) -> list[Gate]:
    """Three alternating CNOTs, or on a one-way edge three same-direction
    CNOTs with the middle one turned around by four Hadamards."""
    u, v = edge
    fwd, bwd = cg.has_edge(u, v), cg.has_edge(v, u)
    if fwd and bwd:
        return [_cx(u, v), _cx(v, u), _cx(u, v)]
    if not (fwd or bwd):
        raise ValueError(f"({u},{v}) is not an edge of {cg.name}")
    a, b = (u, v) if fwd else (v, u)
    return [_cx(a, b), _h(a), _h(b), _cx(a, b), _h(a), _h(b), _cx(a, b)]


def fix_direction(g: Gate, tau, cg: CouplingGraph) -> list[Gate]:
    pc, pt = tau[g.control], tau[g.target]
    if cg.has_edge(pc, pt):
        return [Gate("cx", (pc, pt), g.params, g.id)]
    if cg.has_edge(pt, pc):
        return [_h(pc), _h(pt), Gate("cx", (pt, pc), g.params, g.id), _h(pc), _h(pt)]
    raise ValueError(f"{g.to_qasm()} maps to non-adjacent Q{pc}, Q{pt}")


def _drop_undone(swaps: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for s in swaps:
        if out and sorted(out[-1]) == sorted(s):
            out.pop()
        else:
            out.append(s)
    return out


_MEASURE = re.compile(r"(measure\s+\w+\s*\[\s*)(\d+)(\s*\].*)", re.S)


def _remap_measure(line: str, tau: Mapping) -> str:
    m = _MEASURE.match(line)
    return f"{m.group(1)}{tau[int(m.group(2))]}{m.group(3)}" if m else line


def assemble_output(lc: LayeredCircuit, rr: RouteResult, prog: QasmProgram, cg: CouplingGraph) -> tuple[QasmProgram, RoutedResult]:
    """Emit decomposed SWAPs then mapped gates, layer by layer.

    One-qubit gates follow their anchor CNOT and are mapped with the
    mapping in force at that point.
    """
    if any(g.name != "cx" for g in lc.gates if g.is_two_qubit):
        raise ValueError("only CNOT is supported as a two-qubit input gate")
    m = rr.initial_mapping.copy()
    body: list[Gate] = []
    segments: list[Segment] = []

    def one(gid: int) -> None:
        g = lc.gates[gid]
        body.append(Gate(g.name, (m.tau[g.qubits[0]],), g.params, g.id))

    for gid in lc.prefix:
        one(gid)
    swap_total = 0
    for i, layer in enumerate(lc.layers):
        for edge in _drop_undone(rr.layer_swaps[i]):
            seq = decompose_swap(edge, cg)
            segments.append(Segment(len(body), len(seq), "swap", edge))
            body.extend(seq)
            m.swap_physical(*edge)
            swap_total += 1
        for gid in layer:
            seq = fix_direction(lc.gates[gid], m.tau, cg)
            if len(seq) > 1:
                segments.append(Segment(len(body), len(seq), "reversed", (seq[2].control, seq[2].target)))
            body.extend(seq)
            for aid in lc.attached.get(gid, ()):
                one(aid)
    if m != rr.final_mapping:
        raise AssertionError("replayed mapping disagrees with the router's final mapping")

    out = QasmProgram(
        prog.qreg_name,
        cg.n_qubits,
        body,
        list(prog.includes),
        list(prog.cregs),
        [_remap_measure(x, m) for x in prog.measures],
    )
    n_cx_in = sum(1 for g in prog.gates if g.is_two_qubit)
    n_cx_out = sum(1 for g in body if g.is_two_qubit)
    n_h_in = sum(1 for g in prog.gates if g.name == "h")
    n_h_out = sum(1 for g in body if g.name == "h")
    stats = {
        "added_gates": len(body) - len(prog.gates),
        "added_cx": n_cx_out - n_cx_in,
        "added_h": n_h_out - n_h_in,
        "swaps": swap_total,
        "reversed_cx": sum(1 for s in segments if s.kind == "reversed"),
        "depth_in": circuit_depth(prog.gates),
        "depth_out": circuit_depth(body),
    }
    return out, RoutedResult(rr.initial_mapping.copy(), m, body, segments, stats)
