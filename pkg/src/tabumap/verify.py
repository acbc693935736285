"""Checks that a routed circuit does what the input circuit does.

Two independent routes: a structural replay that matches every output gate
back to an input gate through the tracked qubit permutation, and a
statevector comparison on random product states for small circuits.
"""

from __future__ import annotations

import ast
import math
import operator
from collections import deque
from dataclasses import dataclass

import numpy as np

from tabumap.coupling import CouplingGraph
from tabumap.output import RoutedResult, decompose_swap
from tabumap.qasm import Gate, QasmProgram

__all__ = [
    "CheckReport",
    "structural_check",
    "simulate_statevector",
    "assert_equivalence",
    "gate_matrix",
]

MAX_SIM_QUBITS = 10


@dataclass
class CheckReport:
    ok: bool
    index: int = -1
    reason: str = ""
    deviation: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def _fail(index: int, reason: str) -> CheckReport:
    return CheckReport(False, index, reason)


def structural_check(inp: QasmProgram, out: QasmProgram, rr: RoutedResult, cg: CouplingGraph) -> CheckReport:
    """Replay ``out`` and match it gate-for-gate against ``inp``.

    SWAP segments update the physical-to-logical permutation; every other
    gate must be the next unconsumed input gate on each of its logical
    qubits. Every output CNOT must sit on a directed device edge.
    """
    phys = list(rr.initial_mapping.phys)
    queues: dict[int, deque[int]] = {}
    for g in inp.gates:
        for q in g.qubits:
            queues.setdefault(q, deque()).append(g.id)
    segs = {s.start: s for s in rr.segments}
    gates = out.gates

    def consume(i: int, name: str, pqs: tuple[int, ...], params) -> CheckReport | None:
        lqs = tuple(phys[p] for p in pqs)
        if any(l < 0 for l in lqs):
            return _fail(i, f"gate acts on a free physical qubit: {pqs}")
        heads = {queues[l][0] if queues.get(l) else None for l in lqs}
        if len(heads) != 1 or None in heads:
            return _fail(i, f"{name} on logical {lqs} is not next in input order")
        gid = heads.pop()
        ref = inp.gates[gid]
        if (ref.name, ref.qubits, ref.params) != (name, lqs, params):
            return _fail(i, f"expected {ref.to_qasm()} but found {name} on logical {lqs}")
        for l in lqs:
            queues[l].popleft()
        return None

    i = 0
    while i < len(gates):
        if gates[i].is_two_qubit and not cg.has_edge(*gates[i].qubits):
            return _fail(i, f"{gates[i].to_qasm()} is not on a directed edge of {cg.name}")
        seg = segs.get(i)
        if seg is not None:
            chunk = gates[i:i + seg.length]
            for k, g in enumerate(chunk):
                if g.is_two_qubit and not cg.has_edge(*g.qubits):
                    return _fail(i + k, f"{g.to_qasm()} is not on a directed edge of {cg.name}")
            if seg.kind == "swap":
                want = decompose_swap(seg.edge, cg)
                if len(chunk) != len(want) or not all(a.same_op(b) for a, b in zip(chunk, want)):
                    return _fail(i, f"malformed SWAP decomposition on {seg.edge}")
                u, v = seg.edge
                phys[u], phys[v] = phys[v], phys[u]
            elif seg.kind == "reversed":
                pt, pc = seg.edge
                want = [Gate("h", (pc,)), Gate("h", (pt,)), Gate("cx", (pt, pc)), Gate("h", (pc,)), Gate("h", (pt,))]
                if len(chunk) != 5 or not all(
                    (a.name, a.qubits) == (b.name, b.qubits) for a, b in zip(chunk, want)
                ):
                    return _fail(i, f"malformed reversed CNOT on {seg.edge}")
                bad = consume(i, "cx", (pc, pt), chunk[2].params)
                if bad is not None:
                    return bad
            else:
                return _fail(i, f"unknown segment kind {seg.kind!r}")
            i += seg.length
            continue
        g = gates[i]
        bad = consume(i, g.name, g.qubits, g.params)
        if bad is not None:
            return bad
        i += 1

    left = sorted({gid for qu in queues.values() for gid in qu})
    if left:
        return _fail(len(gates), f"unconsumed input gate(s): {left[:5]}")
    if phys != list(rr.final_mapping.phys):
        return _fail(len(gates), "replayed permutation differs from the final mapping")
    return CheckReport(True)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}


def _eval_param(text: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return -ev(node.operand) if isinstance(node.op, ast.USub) else ev(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*(ev(a) for a in node.args))
        raise ValueError(f"unsupported parameter expression {text!r}")

    return ev(ast.parse(text.strip(), mode="eval"))


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


_FIXED = {
    "id": np.eye(2),
    "x": np.array([[0, 1], [1, 0]]),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.diag([1, -1]),
    "h": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, np.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "sx": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2,
    "sxdg": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]) / 2,
}


def gate_matrix(name: str, params: str | None = None) -> np.ndarray:
    """2x2 unitary for a named one-qubit gate."""
    args = [_eval_param(p) for p in params.split(",")] if params else []
    if name in _FIXED and not args:
        return _FIXED[name].astype(complex)
    if name in ("u1", "p") and len(args) == 1:
        return np.diag([1, np.exp(1j * args[0])])
    if name == "rz" and len(args) == 1:
        return np.diag([np.exp(-0.5j * args[0]), np.exp(0.5j * args[0])])
    if name == "rx" and len(args) == 1:
        c, s = math.cos(args[0] / 2), math.sin(args[0] / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if name == "ry" and len(args) == 1:
        c, s = math.cos(args[0] / 2), math.sin(args[0] / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "u2" and len(args) == 2:
        return _u3(math.pi / 2, *args)
    if name in ("u3", "u") and len(args) == 3:
        return _u3(*args)
    raise ValueError(f"no matrix for gate {name}({params or ''})")


def _apply(psi: np.ndarray, g: Gate, axis: dict[int, int], matrices) -> np.ndarray:
    if g.name == "cx":
        c, t = axis[g.qubits[0]], axis[g.qubits[1]]
        psi = psi.copy()
        sel = [slice(None)] * psi.ndim
        sel[c] = 1
        sub = psi[tuple(sel)]
        tt = t if t < c else t - 1
        psi[tuple(sel)] = np.flip(sub, axis=tt)
        return psi
    if g.name == "swap":
        a, b = axis[g.qubits[0]], axis[g.qubits[1]]
        return np.swapaxes(psi, a, b).copy()
    mat = matrices.get(g.name) if matrices else None
    if mat is None:
        mat = gate_matrix(g.name, g.params)
    a = axis[g.qubits[0]]
    return np.moveaxis(np.tensordot(mat, psi, axes=([1], [a])), 0, a)


def _run(gates, wires: list[int], psi: np.ndarray, matrices=None) -> np.ndarray:
    axis = {q: i for i, q in enumerate(wires)}
    for g in gates:
        missing = [q for q in g.qubits if q not in axis]
        if missing:
            raise ValueError(f"{g.to_qasm()} acts outside the simulated wires {wires}")
        psi = _apply(psi, g, axis, matrices)
    return psi


def simulate_statevector(
    prog: QasmProgram,
    wires: list[int] | None = None,
    max_qubits: int = MAX_SIM_QUBITS,
    matrices: dict[str, np.ndarray] | None = None,
) -> np.ndarray:
    """Amplitudes after running ``prog`` on |0...0>.

    ``wires`` picks (and orders) the simulated qubits, defaulting to every
    declared qubit; the first wire is the most significant bit.
    """
    wires = list(range(prog.n_qubits)) if wires is None else list(wires)
    if len(wires) > max_qubits:
        raise ValueError(f"{len(wires)} qubits exceeds the simulation limit of {max_qubits}")
    psi = np.zeros((2,) * len(wires), dtype=complex)
    psi[(0,) * len(wires)] = 1.0
    return _run(prog.gates, wires, psi, matrices).reshape(-1)


def _random_qubit_states(rng: np.random.Generator, n: int, trials: int) -> np.ndarray:
    v = rng.normal(size=(trials, n, 2)) + 1j * rng.normal(size=(trials, n, 2))
    return v / np.linalg.norm(v, axis=2, keepdims=True)


def _product(states: np.ndarray) -> np.ndarray:
    """(trials, n, 2) single-qubit states -> tensor of shape (2,)*n + (trials,)."""
    trials, n, _ = states.shape
    psi = np.ones((trials,), dtype=complex)
    for k in range(n):
        psi = np.einsum("...t,tb->...bt", psi, states[:, k, :])
    return psi


def assert_equivalence(
    inp: QasmProgram,
    out: QasmProgram,
    rr: RoutedResult,
    trials: int = 8,
    seed: int = 0,
    tol: float = 1e-9,
    max_output_qubits: int = 20,
) -> CheckReport:
    """Compare both circuits on random product states, up to global phase.

    The output state is read back through the final mapping; physical
    qubits that hold no logical qubit must end in |0>.
    """
    logical = inp.active_qubits()
    if len(logical) > MAX_SIM_QUBITS:
        raise ValueError(f"{len(logical)} logical qubits exceeds the limit of {MAX_SIM_QUBITS}")
    init, final = rr.initial_mapping, rr.final_mapping
    wires = sorted(
        {q for g in out.gates for q in g.qubits}
        | {init.tau[l] for l in logical}
        | {final.tau[l] for l in logical}
    )
    if len(wires) > max_output_qubits:
        raise ValueError(f"output touches {len(wires)} qubits, limit {max_output_qubits}")

    rng = np.random.default_rng(seed)
    states = _random_qubit_states(rng, len(logical), trials)
    zero = np.zeros((trials, 1, 2), dtype=complex)
    zero[:, 0, 0] = 1

    psi_in = _run(inp.gates, logical, _product(states))

    slot = {l: k for k, l in enumerate(logical)}
    start = np.concatenate(
        [states[:, [slot[init.phys[p]]], :] if init.phys[p] in slot else zero for p in wires], axis=1
    )
    psi_out = _run(out.gates, wires, _product(start))

    # expected: input result with logical l moved to wire final.tau[l], idle wires |0>
    idle = [p for p in wires if final.phys[p] not in slot]
    expect = psi_in
    for _ in idle:
        expect = np.einsum("...t,b->...bt", expect, np.array([1, 0], dtype=complex))
    src_axes = [final.tau[l] for l in logical] + idle
    perm = [src_axes.index(p) for p in wires] + [len(wires)]
    expect = np.transpose(expect, perm)

    a = psi_out.reshape(-1, trials)
    b = expect.reshape(-1, trials)
    overlap = np.einsum("it,it->t", b.conj(), a)
    phase = np.where(np.abs(overlap) > 0, overlap / np.maximum(np.abs(overlap), 1e-300), 1.0)
    dev = float(np.max(np.abs(a - b * phase)))
    if dev > tol:
        return CheckReport(False, -1, f"state mismatch, worst amplitude deviation {dev:.3e}", dev)
    return CheckReport(True, deviation=dev)
