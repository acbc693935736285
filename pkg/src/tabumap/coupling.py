"""Physical devices: coupling graphs, distances, shortest paths and path costs."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from tabumap.qasm import Gate

__all__ = [
    "CouplingGraph",
    "DistanceTable",
    "DeviceError",
    "load_device",
    "all_pairs_distances",
    "is_executable",
    "path_cost",
    "DEVICES",
]

SWAP_CNOTS = 3
REVERSAL_HS = 4


class DeviceError(ValueError):
    pass


@dataclass(frozen=True)
class CouplingGraph:
    name: str
    n_qubits: int
    directed_edges: frozenset[tuple[int, int]]
    bilateral: bool = False

    def __post_init__(self):
        for u, v in self.directed_edges:
            if u == v:
                raise DeviceError(f"{self.name}: self-loop on {u}")
            if not (0 <= u < self.n_qubits and 0 <= v < self.n_qubits):
                raise DeviceError(f"{self.name}: edge ({u},{v}) outside 0..{self.n_qubits - 1}")
        symmetric = all((v, u) in self.directed_edges for u, v in self.directed_edges)
        if self.bilateral and not symmetric:
            raise DeviceError(f"{self.name}: marked bilateral but some edges are one-way")

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Skeleton neighbours of each vertex, ascending."""
        nbrs: list[set[int]] = [set() for _ in range(self.n_qubits)]
        for u, v in self.directed_edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return [sorted(s) for s in nbrs]

    @cached_property
    def skeleton_edges(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, v in self.directed_edges})

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.directed_edges

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.directed_edges or (v, u) in self.directed_edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def distances(self) -> "DistanceTable":
        return all_pairs_distances(self)


def _both_ways(pairs):
    return frozenset(pairs) | frozenset((v, u) for u, v in pairs)


def _q20() -> CouplingGraph:
    pairs = []
    for r in range(4):
        for c in range(4):
            pairs.append((5 * r + c, 5 * r + c + 1))
    for r in range(3):
        for c in range(5):
            pairs.append((5 * r + c, 5 * r + c + 5))
    pairs += [(1, 7), (2, 6), (3, 9), (4, 8), (5, 11), (6, 10),
              (7, 13), (8, 12), (11, 17), (12, 16), (13, 19), (14, 18)]
    return CouplingGraph("q20", 20, _both_ways(pairs), bilateral=True)


# directions read off the IBM QX drawings (control -> target)
_QX2 = [(0, 1), (0, 2), (1, 2), (3, 2), (4, 3), (4, 2)]
_QX4 = [(1, 0), (2, 0), (2, 1), (2, 3), (4, 3), (4, 2)]
_QX3 = [
    (15, 0), (15, 14), (13, 14), (12, 13), (12, 11), (11, 10), (9, 10),
    (0, 1), (3, 14), (13, 4), (12, 5), (6, 11), (7, 10), (9, 8),
    (1, 2), (2, 3), (4, 3), (4, 5), (6, 7), (8, 7),
]
_QX5 = [
    (15, 0), (15, 14), (13, 14), (12, 13), (12, 11), (11, 10), (9, 10),
    (1, 0), (15, 2), (3, 14), (13, 4), (12, 5), (6, 11), (7, 10), (9, 8),
    (1, 2), (2, 3), (3, 4), (5, 4), (6, 5), (6, 7), (8, 7),
]

DEVICES = {
    "qx2": lambda: CouplingGraph("qx2", 5, frozenset(_QX2)),
    "qx3": lambda: CouplingGraph("qx3", 16, frozenset(_QX3)),
    "qx4": lambda: CouplingGraph("qx4", 5, frozenset(_QX4)),
    "qx5": lambda: CouplingGraph("qx5", 16, frozenset(_QX5)),
    "q20": _q20,
}


def _parse_device_file(path: str) -> CouplingGraph:
    bilateral = None
    n = None
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" in line:
                key, _, val = (s.strip() for s in line.partition(":"))
                if key == "bilateral" and val in ("true", "false"):
                    bilateral = val == "true"
                elif key == "qubits" and val.isdigit():
                    n = int(val)
                else:
                    raise DeviceError(f"{path}:{lineno}: bad header {line!r}")
                continue
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise DeviceError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if bilateral is None:
        raise DeviceError(f"{path}: missing 'bilateral: true|false' header")
    if not edges:
        raise DeviceError(f"{path}: no edges")
    if n is None:
        n = max(max(e) for e in edges) + 1
    es = _both_ways(edges) if bilateral else frozenset(edges)
    name = os.path.splitext(os.path.basename(path))[0]
    return CouplingGraph(name, n, es, bilateral=bilateral)


def load_device(name: str) -> CouplingGraph:
    """Return a built-in device by name, or parse a device file."""
    key = name.lower()
    if key in DEVICES:
        return DEVICES[key]()
    if os.path.isfile(name):
        return _parse_device_file(name)
    raise DeviceError(f"unknown device {name!r} (built-in: {', '.join(sorted(DEVICES))})")


@dataclass
class DistanceTable:
    """Hop distances on the undirected skeleton plus all shortest paths.

    Path sets are enumerated on first request and cached.
    """

    cg: CouplingGraph
    dist: np.ndarray
    _paths: dict[tuple[int, int], list[tuple[int, ...]]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.d = self.dist.tolist()

    def paths(self, i: int, j: int) -> list[tuple[int, ...]]:
        """All shortest paths from ``i`` to ``j``; neighbours tried in ascending order."""
        key = (i, j)
        if key not in self._paths:
            out: list[tuple[int, ...]] = []
            adj = self.cg.adjacency
            d = self.d

            def walk(path):
                cur = path[-1]
                if cur == j:
                    out.append(tuple(path))
                    return
                for nxt in adj[cur]:
                    if d[nxt][j] == d[cur][j] - 1:
                        path.append(nxt)
                        walk(path)
                        path.pop()

            walk([i])
            self._paths[key] = out
        return self._paths[key]


def _components(cg: CouplingGraph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(cg.n_qubits):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in cg.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def all_pairs_distances(cg: CouplingGraph) -> DistanceTable:
    """Floyd-Warshall over the undirected skeleton with unit edge lengths."""
    n = cg.n_qubits
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0)
    for u, v in cg.skeleton_edges:
        dist[u, v] = dist[v, u] = 1
    for k in range(n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    if np.isinf(dist).any():
        comps = _components(cg)
        raise DeviceError(f"{cg.name} is disconnected; components: {comps}")
    return DistanceTable(cg, dist.astype(int))


def is_executable(g: Gate, tau: Sequence[int], cg: CouplingGraph, relaxed: bool = False) -> bool:
    """Whether ``g`` can run as-is under mapping ``tau``.

    With ``relaxed`` the direction of the edge is ignored, since a reversed
    CNOT is fixed locally with Hadamards.
    """
    if not g.is_two_qubit:
        return True
    pc, pt = tau[g.control], tau[g.target]
    if pc < 0 or pt < 0:
        raise ValueError(f"gate {g.to_qasm()} has an unmapped operand")
    return cg.adjacent(pc, pt) if relaxed else cg.has_edge(pc, pt)


def path_cost(path: Sequence[int], cg: CouplingGraph, g: Gate, tau: Sequence[int] | None = None) -> int:
    """Elementary gates needed to run ``g`` after moving its control along ``path``.

    The control walks towards the target, one SWAP per edge, until it rests
    on the last edge of the path. A SWAP over a one-way edge costs three
    CNOTs and four Hadamards (three CNOTs on a two-way edge), and a final
    edge pointing the wrong way needs four more Hadamards.
    """
    if tau is not None and (path[0] != tau[g.control] or path[-1] != tau[g.target]):
        raise ValueError(f"path {tuple(path)} does not join the operands of {g.to_qasm()}")
    for a, b in zip(path, path[1:]):
        if not cg.adjacent(a, b):
            raise ValueError(f"({a},{b}) is not an edge of {cg.name}")
    if len(path) < 2:
        raise ValueError("path must contain both endpoints")
    cost = sum(swap_cost(a, b, cg) for a, b in zip(path[:-2], path[1:-1]))
    if not cg.has_edge(path[-2], path[-1]):
        cost += REVERSAL_HS
    return cost


def swap_cost(u: int, v: int, cg: CouplingGraph) -> int:
    """Elementary gates in one SWAP on edge (u, v)."""
    if cg.has_edge(u, v) and cg.has_edge(v, u):
        return SWAP_CNOTS
    return SWAP_CNOTS + REVERSAL_HS
