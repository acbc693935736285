"""Layer-by-layer SWAP insertion driven by tabu search.

For each layer the router repeatedly proposes SWAPs on edges of shortest
paths between the operands of blocked gates, scores every proposal with one
of three evaluators (distance sum, depth, or configuration checking with
edge weights), and applies the best one that is not tabu. The mapping that
makes a layer executable seeds the next layer.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from tabumap.circuit import LayeredCircuit
from tabumap.coupling import CouplingGraph, DistanceTable
from tabumap.mapping import Mapping
from tabumap.qasm import Gate

__all__ = [
    "RouterConfig",
    "Candidate",
    "TabuList",
    "CcaWeights",
    "RoutingError",
    "LayerContext",
    "candidate_set",
    "evaluate_num",
    "evaluate_depth",
    "evaluate_cca",
    "smooth_weights",
    "Router",
    "RouteResult",
    "route_circuit",
]

logger = logging.getLogger(__name__)

EVALUATORS = ("num", "dep", "cca")
SWAP_DEPTH = 3

Edge = tuple[int, int]
Pair = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass
class RouterConfig:
    evaluator: str = "num"
    delta: float = 0.5
    lookahead: int = 2
    tenure: int = 5
    max_iters: int | None = None  # per layer; None -> 2 * |directed edges|
    rho: float = 0.5
    threshold: float | None = None  # None -> 10 * |directed edges|

    def __post_init__(self):
        if self.evaluator not in EVALUATORS:
            raise ValueError(f"evaluator must be one of {EVALUATORS}, got {self.evaluator!r}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.lookahead < 0 or self.tenure < 0:
            raise ValueError("lookahead and tenure must be non-negative")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")

    def iteration_bound(self, cg: CouplingGraph) -> int:
        return self.max_iters if self.max_iters is not None else 2 * len(cg.directed_edges)

    def weight_threshold(self, cg: CouplingGraph) -> float:
        return self.threshold if self.threshold is not None else 10.0 * len(cg.directed_edges)


@dataclass
class Candidate:
    swap_edge: Edge
    mapping_after: Mapping
    swaps_so_far: tuple[Edge, ...]
    value: float


class TabuList:
    """Recently applied SWAP edges; an edge stays tabu for ``tenure`` iterations."""

    def __init__(self, tenure: int):
        self.tenure = tenure
        self.entries: deque[tuple[Edge, int]] = deque()

    def is_tabu(self, edge: Edge, iteration: int) -> bool:
        e = _edge(*edge)
        return any(x == e and expiry > iteration for x, expiry in self.entries)

    def push(self, edge: Edge, iteration: int) -> None:
        if self.tenure == 0:
            return
        self.entries.append((_edge(*edge), iteration + self.tenure))
        while len(self.entries) > self.tenure:
            self.entries.popleft()

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class CcaWeights:
    w: dict[Edge, float]
    rho: float = 0.5
    threshold: float = 10.0

    @classmethod
    def initial(cls, cg: CouplingGraph, rho: float, threshold: float) -> "CcaWeights":
        return cls({e: 1.0 for e in cg.skeleton_edges}, rho, threshold)

    @property
    def mean(self) -> float:
        return sum(self.w.values()) / len(self.w) if self.w else 0.0

    def __getitem__(self, edge: Edge) -> float:
        return self.w[_edge(*edge)]

    def select(self, edge: Edge) -> "CcaWeights":
        """Bump the chosen edge; smooth everything once it passes the threshold."""
        w = dict(self.w)
        w[_edge(*edge)] += 1.0
        out = CcaWeights(w, self.rho, self.threshold)
        if any(x > self.threshold for x in w.values()):
            out = smooth_weights(out)
        return out


def smooth_weights(weights: CcaWeights) -> CcaWeights:
    """Pull every weight towards the mean: ``w <- rho * w + (1 - rho) * mean``."""
    mean = weights.mean
    rho = weights.rho
    return CcaWeights({e: rho * x + (1 - rho) * mean for e, x in weights.w.items()}, rho, weights.threshold)


class RoutingError(RuntimeError):
    """The iteration bound ran out before a layer became executable."""

    def __init__(self, message: str, layer: int, mapping: Mapping, swaps: list[list[Edge]]):
        super().__init__(message)
        self.layer = layer
        self.mapping = mapping
        self.swaps = swaps


@dataclass
class LayerContext:
    """Gates seen by the evaluators while routing one layer.

    ``pending`` are current-layer gates blocked under the mapping the layer
    started the iteration with, ``done`` the ones that were already
    executable, and ``window`` holds the look-ahead layers.
    """

    pending: list[Pair]
    done: list[Pair]
    window: list[list[Pair]]
    delta: float
    dist: list[list[int]]


def _pairs(gates: Sequence[Gate]) -> list[Pair]:
    return [(g.control, g.target) for g in gates]


def evaluate_num(tau: Sequence[int], ctx: LayerContext) -> float:
    """Distance sum over blocked gates plus the attenuated look-ahead sum.

    Gates of the current layer that were already executable are left out.
    """
    d = ctx.dist
    cur = sum(d[tau[c]][tau[t]] for c, t in ctx.pending)
    ahead = sum(d[tau[c]][tau[t]] for layer in ctx.window for c, t in layer)
    return cur + ctx.delta * ahead


def _duration(dist: int) -> int:
    return 1 + SWAP_DEPTH * (dist - 1)


def evaluate_depth(tau: Sequence[int], ctx: LayerContext) -> float:
    """Depth of the current layer plus attenuated depth of the look-ahead layers.

    A gate whose operands sit ``k`` apart needs ``k - 1`` SWAPs of depth 3
    before it runs; each layer lasts as long as its slowest gate.
    """
    d = ctx.dist
    cur = max((_duration(d[tau[c]][tau[t]]) for c, t in ctx.pending + ctx.done), default=0)
    ahead = sum(max((_duration(d[tau[c]][tau[t]]) for c, t in layer), default=0) for layer in ctx.window)
    return cur + ctx.delta * ahead


def cca_subscore(before: Sequence[int], after: Sequence[int], ctx: LayerContext) -> int:
    """Gates brought closer minus gates pushed apart."""
    d = ctx.dist
    make = brk = 0
    for layer in (ctx.pending, ctx.done, *ctx.window):
        for c, t in layer:
            x, y = d[before[c]][before[t]], d[after[c]][after[t]]
            if y < x:
                make += 1
            elif y > x:
                brk += 1
    return make - brk


def evaluate_cca(tau: Sequence[int], before: Sequence[int], edge: Edge, weights: CcaWeights, ctx: LayerContext) -> float:
    return evaluate_num(tau, ctx) - weights[edge] * cca_subscore(before, tau, ctx)


def candidate_set(
    layer: Sequence[Gate],
    m: Mapping,
    dt: DistanceTable,
    cg: CouplingGraph,
    evaluate: Callable[[Mapping, Edge], float],
    swaps_so_far: tuple[Edge, ...] = (),
) -> list[Candidate]:
    """SWAP proposals for the blocked gates of ``layer``.

    Only edges of shortest paths between the operands of a blocked gate
    are proposed, and only those touching a physical qubit that holds an
    operand of some blocked gate. Each edge appears once, in path order.
    """
    blocked = [g for g in layer if not cg.adjacent(m.tau[g.control], m.tau[g.target])]
    touch = {m.tau[q] for g in blocked for q in g.qubits}
    seen: set[Edge] = set()
    out: list[Candidate] = []
    for g in blocked:
        for path in dt.paths(m.tau[g.control], m.tau[g.target]):
            for u, v in zip(path, path[1:]):
                key = _edge(u, v)
                if key in seen or not (u in touch or v in touch):
                    continue
                seen.add(key)
                after = m.swapped(u, v)
                out.append(Candidate((u, v), after, swaps_so_far + ((u, v),), evaluate(after, (u, v))))
    return out


@dataclass
class RouteResult:
    initial_mapping: Mapping
    final_mapping: Mapping
    layer_swaps: list[list[Edge]]
    layer_mappings: list[Mapping]
    evaluator: str = "num"

    @property
    def swap_count(self) -> int:
        return sum(len(s) for s in self.layer_swaps)


class Router:
    """Holds the search state shared across layers: tabu list, edge weights, iteration count."""

    def __init__(self, cg: CouplingGraph, cfg: RouterConfig | None = None):
        self.cg = cg
        self.cfg = cfg or RouterConfig()
        self.dt = cg.distances
        self.tabu = TabuList(self.cfg.tenure)
        self.weights = CcaWeights.initial(cg, self.cfg.rho, self.cfg.weight_threshold(cg))
        self.iteration = 0

    def context(self, lc: LayeredCircuit, i: int, m: Mapping) -> LayerContext:
        gates = lc.layer_gates(i)
        pending = [g for g in gates if not self.cg.adjacent(m.tau[g.control], m.tau[g.target])]
        done = [g for g in gates if g not in pending]
        window = [_pairs(lc.layer_gates(j)) for j in range(i + 1, min(i + 1 + self.cfg.lookahead, lc.depth))]
        return LayerContext(_pairs(pending), _pairs(done), window, self.cfg.delta, self.dt.d)

    def evaluator(self, ctx: LayerContext, before: Mapping) -> Callable[[Mapping, Edge], float]:
        kind = self.cfg.evaluator
        if kind == "num":
            return lambda m, e: evaluate_num(m.tau, ctx)
        if kind == "dep":
            return lambda m, e: evaluate_depth(m.tau, ctx)
        weights = self.weights
        return lambda m, e: evaluate_cca(m.tau, before.tau, e, weights, ctx)

    def route_layer(self, m: Mapping, i: int, lc: LayeredCircuit) -> tuple[Mapping, list[Edge]]:
        """Tabu search over SWAPs until every gate of layer ``i`` is adjacent."""
        gates = lc.layer_gates(i)
        swaps: list[Edge] = []
        best_seen = None
        for _ in range(self.cfg.iteration_bound(self.cg)):
            ctx = self.context(lc, i, m)
            score = self.evaluator(ctx, m)
            if best_seen is None:
                best_seen = score(m, (0, 0)) if self.cfg.evaluator != "cca" else evaluate_num(m.tau, ctx)
            cands = candidate_set(gates, m, self.dt, self.cg, score, tuple(swaps))
            if not cands:
                return m, swaps
            # aspiration: a tabu move that beats everything seen in this layer is allowed
            allowed = [c for c in cands if not self.tabu.is_tabu(c.swap_edge, self.iteration) or c.value < best_seen]
            pick = min(allowed or cands, key=lambda c: c.value)
            m = pick.mapping_after
            swaps.append(pick.swap_edge)
            self.tabu.push(pick.swap_edge, self.iteration)
            if self.cfg.evaluator == "cca":
                self.weights = self.weights.select(pick.swap_edge)
            best_seen = min(best_seen, pick.value)
            self.iteration += 1
        blocked = [g for g in gates if not self.cg.adjacent(m.tau[g.control], m.tau[g.target])]
        if blocked:
            raise RoutingError(
                f"layer {i}: {len(blocked)} gate(s) still blocked after {len(swaps)} swaps", i, m, [swaps]
            )
        return m, swaps

    def route(self, lc: LayeredCircuit, m0: Mapping) -> RouteResult:
        m = m0.copy()
        layer_swaps: list[list[Edge]] = []
        layer_maps: list[Mapping] = []
        for i in range(lc.depth):
            try:
                m, swaps = self.route_layer(m, i, lc)
            except RoutingError as exc:
                raise RoutingError(str(exc), i, exc.mapping, layer_swaps + exc.swaps) from None
            layer_swaps.append(swaps)
            layer_maps.append(m)
        return RouteResult(m0.copy(), m, layer_swaps, layer_maps, self.cfg.evaluator)


def route_circuit(lc: LayeredCircuit, m0: Mapping, cg: CouplingGraph, cfg: RouterConfig | None = None) -> RouteResult:
    if not m0.is_total({q for g in lc.gates if g.is_two_qubit for q in g.qubits}):
        raise ValueError("initial mapping must cover every qubit used by a CNOT")
    return Router(cg, cfg).route(lc, m0)
