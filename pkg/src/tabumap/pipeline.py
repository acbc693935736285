"""End-to-end transformation: parse, layer, place, route, emit."""

from __future__ import annotations

import time
from dataclasses import dataclass

from tabumap.circuit import build_interaction_graph, compact_lifetime, layer_asap
from tabumap.coupling import CouplingGraph
from tabumap.initial import initial_mapping
from tabumap.mapping import Mapping
from tabumap.output import RoutedResult, assemble_output
from tabumap.qasm import QasmProgram
from tabumap.router import RouteResult, RouterConfig, route_circuit

__all__ = ["Transformed", "place", "transform", "scale_of"]


@dataclass
class Transformed:
    program: QasmProgram
    result: RoutedResult
    route: RouteResult
    wall_ms: float

    @property
    def stats(self) -> dict:
        return self.result.stats


def scale_of(depth: int) -> str:
    """Size bucket of a circuit by depth."""
    if depth <= 100:
        return "small"
    return "large" if depth > 1000 else "medium"


def place(prog: QasmProgram, cg: CouplingGraph) -> Mapping:
    """Initial mapping for ``prog`` on ``cg``."""
    lc = compact_lifetime(layer_asap(prog))
    return initial_mapping(build_interaction_graph(prog), lc, cg)


def transform(
    prog: QasmProgram,
    cg: CouplingGraph,
    cfg: RouterConfig | None = None,
    initial: Mapping | None = None,
) -> Transformed:
    """Route ``prog`` onto ``cg`` and return the physical circuit with its bookkeeping."""
    t0 = time.perf_counter()
    lc = compact_lifetime(layer_asap(prog))
    m0 = initial if initial is not None else initial_mapping(build_interaction_graph(prog), lc, cg)
    rr = route_circuit(lc, m0, cg, cfg)
    out, res = assemble_output(lc, rr, prog, cg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    res.stats["wall_ms"] = round(wall_ms, 3)
    res.stats["scale"] = scale_of(res.stats["depth_in"])
    return Transformed(out, res, rr, wall_ms)
