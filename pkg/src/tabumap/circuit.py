"""Layering and interaction-graph extraction for logical circuits."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace

from tabumap.qasm import Gate, QasmProgram

__all__ = [
    "LayeredCircuit",
    "InteractionGraph",
    "layer_asap",
    "compact_lifetime",
    "build_interaction_graph",
    "circuit_depth",
]


@dataclass
class LayeredCircuit:
    """Two-qubit gates split into parallel layers.

    One-qubit gates do not occupy layers. Each is attached to the closest
    preceding two-qubit gate on its qubit (``attached``), or to the start of
    the circuit (``prefix``) when there is none.
    """

    gates: list[Gate]
    layers: list[list[int]]
    n_qubits: int
    prefix: list[int] = field(default_factory=list)
    attached: dict[int, list[int]] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def width(self) -> int:
        return self.n_qubits

    def layer_of(self) -> dict[int, int]:
        return {gid: i for i, layer in enumerate(self.layers) for gid in layer}

    def layer_gates(self, i: int) -> list[Gate]:
        return [self.gates[g] for g in self.layers[i]]

    def validate(self) -> None:
        """Raise ``AssertionError`` if a layering invariant is broken."""
        where = self.layer_of()
        two = [g.id for g in self.gates if g.is_two_qubit]
        assert sorted(where) == sorted(two), "every two-qubit gate must sit in exactly one layer"
        for layer in self.layers:
            seen: set[int] = set()
            for gid in layer:
                qs = set(self.gates[gid].qubits)
                assert not (qs & seen), f"layer holds overlapping gates: {layer}"
                seen |= qs
        last: dict[int, int] = {}
        for gid in two:
            for q in self.gates[gid].qubits:
                if q in last:
                    assert where[last[q]] < where[gid], f"gate {gid} placed before predecessor {last[q]}"
                last[q] = gid


def _attach_one_qubit_gates(gates: list[Gate]) -> tuple[list[int], dict[int, list[int]]]:
    prefix: list[int] = []
    attached: dict[int, list[int]] = defaultdict(list)
    anchor: dict[int, int] = {}
    for g in gates:
        if g.is_two_qubit:
            for q in g.qubits:
                anchor[q] = g.id
        elif g.qubits[0] in anchor:
            attached[anchor[g.qubits[0]]].append(g.id)
        else:
            prefix.append(g.id)
    return prefix, dict(attached)


def layer_asap(prog: QasmProgram) -> LayeredCircuit:
    """Place every two-qubit gate one layer after its latest qubit-sharing predecessor."""
    front: dict[int, int] = {}
    layers: list[list[int]] = []
    for g in prog.gates:
        if not g.is_two_qubit:
            continue
        lvl = max((front[q] + 1 for q in g.qubits if q in front), default=0)
        if lvl == len(layers):
            layers.append([])
        layers[lvl].append(g.id)
        for q in g.qubits:
            front[q] = lvl
    prefix, attached = _attach_one_qubit_gates(prog.gates)
    return LayeredCircuit(list(prog.gates), layers, prog.n_qubits, prefix, attached)


def _successors(lc: LayeredCircuit) -> dict[int, list[int]]:
    succ: dict[int, list[int]] = defaultdict(list)
    last: dict[int, int] = {}
    for g in lc.gates:
        if not g.is_two_qubit:
            continue
        for q in g.qubits:
            if q in last:
                succ[last[q]].append(g.id)
            last[q] = g.id
    return succ


def compact_lifetime(lc: LayeredCircuit) -> LayeredCircuit:
    """Delay gates towards their first successor to shorten qubit lifetimes.

    A gate with successors moves to the layer just before its earliest
    successor if that layer has no qubit conflict. Gates without successors
    keep their layer, so the depth never changes.
    """
    succ = _successors(lc)
    where = lc.layer_of()
    layers = [list(layer) for layer in lc.layers]
    busy = [{q for gid in layer for q in lc.gates[gid].qubits} for layer in layers]
    # walk backwards so that delayed successors are already in place
    for gid in sorted(where, key=lambda g: (-where[g], -g)):
        nexts = succ.get(gid)
        if not nexts:
            continue
        target = min(where[s] for s in nexts) - 1
        cur = where[gid]
        if target <= cur:
            continue
        qs = set(lc.gates[gid].qubits)
        if qs & busy[target]:
            continue
        layers[cur].remove(gid)
        busy[cur] -= qs
        layers[target].append(gid)
        busy[target] |= qs
        where[gid] = target
    return replace(lc, layers=layers)


@dataclass
class InteractionGraph:
    """Undirected logical-qubit graph weighted by CNOT multiplicity.

    ``artificial`` holds edges added to connect isolated qubits; their
    weight is 0 and they are never counted as interactions.
    """

    vertices: list[int]
    weights: dict[tuple[int, int], int]
    isolated: set[int] = field(default_factory=set)
    artificial: set[tuple[int, int]] = field(default_factory=set)

    @staticmethod
    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def weight(self, a: int, b: int) -> int:
        return self.weights.get(self.key(a, b), 0)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(set(self.weights) | self.artificial)

    def neighbors(self) -> dict[int, set[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges():
            nbrs[a].add(b)
            nbrs[b].add(a)
        return nbrs

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges() if v in e)

    def total_weight(self) -> int:
        return sum(self.weights.values())


def build_interaction_graph(prog: QasmProgram) -> InteractionGraph:
    weights: dict[tuple[int, int], int] = defaultdict(int)
    for g in prog.gates:
        if g.is_two_qubit:
            weights[InteractionGraph.key(*g.qubits)] += 1
    vertices = prog.active_qubits()
    coupled = {q for e in weights for q in e}
    isolated = {v for v in vertices if v not in coupled}
    return InteractionGraph(vertices, dict(weights), isolated)


def circuit_depth(gates: list[Gate]) -> int:
    """ASAP depth counting every gate, one-qubit gates included."""
    front: dict[int, int] = {}
    depth = 0
    for g in gates:
        lvl = max((front.get(q, 0) for q in g.qubits), default=0) + 1
        for q in g.qubits:
            front[q] = lvl
        depth = max(depth, lvl)
    return depth
