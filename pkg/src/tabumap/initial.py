"""Initial placement: partial subgraph matching followed by greedy completion.

The matcher looks for monomorphisms of the interaction graph into the
undirected device skeleton. Candidates are pruned by degree and by the
sorted degree profile of their neighbourhood, and query vertices are
matched in a connected order, highest degree first. When no complete
embedding exists the deepest partial matches are kept and completed by
placing each leftover qubit next to the mapped qubit it talks to most.
"""

from __future__ import annotations

from collections import deque
from dataclasses import replace

from tabumap.circuit import InteractionGraph, LayeredCircuit
from tabumap.coupling import CouplingGraph
from tabumap.mapping import Mapping

__all__ = [
    "DeviceTooSmall",
    "attach_isolated",
    "find_partial_mappings",
    "complete_mapping",
    "select_initial",
    "initial_mapping",
]

DEFAULT_LIMIT = 50
DEFAULT_BUDGET = 10**6


class DeviceTooSmall(ValueError):
    pass


def attach_isolated(ig: InteractionGraph) -> InteractionGraph:
    """Link every zero-degree vertex to the current highest-degree vertex.

    Vertices are handled in ascending order and degrees are updated as edges
    are added, so a circuit without any CNOT becomes a star around its
    lowest qubit.
    """
    nbrs = ig.neighbors()
    artificial = set(ig.artificial)
    for v in sorted(ig.vertices):
        if nbrs[v] or len(ig.vertices) < 2:
            continue
        hub = min((u for u in ig.vertices if u != v), key=lambda u: (-len(nbrs[u]), u))
        artificial.add(InteractionGraph.key(v, hub))
        nbrs[v].add(hub)
        nbrs[hub].add(v)
    return replace(ig, artificial=artificial)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _matching_order(verts, nbrs, cand_size):
    def rank(v):
        return (-len(nbrs[v]), cand_size[v], v)

    order: list[int] = []
    placed: set[int] = set()
    remaining = set(verts)
    while remaining:
        frontier = [v for v in remaining if nbrs[v] & placed]
        v = min(frontier or remaining, key=rank)
        order.append(v)
        placed.add(v)
        remaining.discard(v)
    return order


def find_partial_mappings(
    ig: InteractionGraph,
    cg: CouplingGraph,
    limit: int = DEFAULT_LIMIT,
    budget: int = DEFAULT_BUDGET,
    n_logical: int | None = None,
) -> list[Mapping]:
    """Backtracking search for (partial) embeddings of ``ig`` into ``cg``.

    Returns up to ``limit`` complete embeddings if any are found within the
    node ``budget``; otherwise the deepest partial matches found by a second
    unfiltered search (every mapping in the result has the same
    ``mapped_count``).
    """
    verts = sorted(ig.vertices)
    if n_logical is None:
        n_logical = (max(verts) + 1) if verts else 0
    if not verts:
        return [Mapping(n_logical, cg.n_qubits)]

    nbrs = ig.neighbors()
    n = len(verts)
    adjmask = [sum(1 << w for w in cg.adjacency[p]) for p in range(cg.n_qubits)]
    cprof = [sorted((cg.degree(w) for w in cg.adjacency[p]), reverse=True) for p in range(cg.n_qubits)]
    full_mask = (1 << cg.n_qubits) - 1

    def profile_ok(u, p):
        uprof = sorted((len(nbrs[w]) for w in nbrs[u]), reverse=True)
        if len(uprof) > len(cprof[p]):
            return False
        return all(a <= b for a, b in zip(uprof, cprof[p]))

    filtered = {u: sum(1 << p for p in range(cg.n_qubits) if profile_ok(u, p)) for u in verts}

    def run(cand, order, want_full, cap):
        back = {u: [w for w in order[:i] if w in nbrs[u]] for i, u in enumerate(order)}
        assign: dict[int, int] = {}
        found: list[dict[int, int]] = []
        best = [-1]
        nodes = [0]

        def record(depth):
            if depth > best[0]:
                best[0] = depth
                found.clear()
            if depth == best[0] and len(found) < limit:
                found.append(dict(assign))

        def done():
            return nodes[0] >= budget or (best[0] >= cap and len(found) >= limit)

        def search(k, used):
            nodes[0] += 1
            if k == n:
                record(len(assign))
                return
            # branch and bound: even mapping every remaining vertex cannot reach the best depth
            if len(assign) + (n - k) < best[0]:
                return
            u = order[k]
            valid = cand[u] & ~used
            for w in back[u]:
                if w in assign:
                    valid &= adjmask[assign[w]]
            for p in _bits(valid):
                assign[u] = p
                search(k + 1, used | (1 << p))
                del assign[u]
                if done():
                    return
            if not want_full:
                # leave u unmapped
                search(k + 1, used)

        search(0, 0)
        exhausted = nodes[0] < budget
        return best[0], found, exhausted

    order = _matching_order(verts, nbrs, {u: bin(filtered[u]).count("1") for u in verts})
    if all(filtered[u] for u in verts):
        depth, found, exhausted = run(filtered, order, want_full=True, cap=n)
        if depth == n:
            return [Mapping.from_dict(a, n_logical, cg.n_qubits) for a in found]
        cap = n - 1 if exhausted else n
    else:
        cap = n - 1
    unfiltered = {u: full_mask for u in verts}
    order = _matching_order(verts, nbrs, {u: cg.n_qubits for u in verts})
    _, found, _ = run(unfiltered, order, want_full=False, cap=cap)
    return [Mapping.from_dict(a, n_logical, cg.n_qubits) for a in found]


def _nearest_free(start: int, m: Mapping, cg: CouplingGraph) -> int:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if m.phys[u] < 0:
            return u
        for v in cg.adjacency[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    raise DeviceTooSmall("no free physical qubit reachable")


def complete_mapping(tau: Mapping, ig: InteractionGraph, cg: CouplingGraph) -> Mapping:
    """Place every unmapped vertex of ``ig`` next to its best-connected mapped partner.

    Unmapped qubits are taken in ascending order. Mapped qubits are ranked
    by CNOT count with the pending qubit, then by degree, then by index
    (both descending); the pending qubit goes to the lowest free neighbour
    of the first ranked partner that has one. If every partner is boxed in,
    it goes to the free qubit nearest the top-ranked partner.
    """
    if len(ig.vertices) > cg.n_qubits:
        raise DeviceTooSmall(f"device too small: {len(ig.vertices)} logical qubits, {cg.n_qubits} physical")
    m = tau.copy()
    nbrs = ig.neighbors()
    queue = deque(v for v in sorted(ig.vertices) if m.tau[v] < 0)
    while queue:
        q = queue.popleft()
        mapped = [c for c in ig.vertices if m.tau[c] >= 0]
        ranked = sorted(mapped, key=lambda c: (-ig.weight(q, c), -len(nbrs[c]), -c))
        spot = -1
        for c in ranked:
            free = [k for k in cg.adjacency[m.tau[c]] if m.phys[k] < 0]
            if free:
                spot = free[0]
                break
        if spot < 0:
            if ranked:
                spot = _nearest_free(m.tau[ranked[0]], m, cg)
            else:
                # nothing placed yet: start at the best-connected physical qubit
                spot = min((p for p in range(cg.n_qubits) if m.phys[p] < 0), key=lambda p: (-cg.degree(p), p))
        m.assign(q, spot)
    return m


def mapping_score(m: Mapping, lc: LayeredCircuit, cg: CouplingGraph) -> int:
    d = cg.distances.d
    return sum(d[m.tau[g.control]][m.tau[g.target]] for g in lc.gates if g.is_two_qubit)


def select_initial(candidates: list[Mapping], ig: InteractionGraph, lc: LayeredCircuit, cg: CouplingGraph) -> Mapping:
    """Complete the candidates with the most mapped qubits and keep the cheapest.

    A completed mapping costs the sum of device distances over all CNOTs;
    ties go to the earliest candidate.
    """
    if not candidates:
        raise ValueError("no candidate mappings")
    top = max(c.mapped_count for c in candidates)
    best, best_score = None, None
    for cand in candidates:
        if cand.mapped_count != top:
            continue
        full = complete_mapping(cand, ig, cg)
        score = mapping_score(full, lc, cg)
        if best_score is None or score < best_score:
            best, best_score = full, score
    return best


def initial_mapping(
    ig: InteractionGraph,
    lc: LayeredCircuit,
    cg: CouplingGraph,
    limit: int = DEFAULT_LIMIT,
    budget: int = DEFAULT_BUDGET,
) -> Mapping:
    if len(ig.vertices) > cg.n_qubits:
        raise DeviceTooSmall(f"device too small: {len(ig.vertices)} logical qubits, {cg.n_qubits} physical")
    linked = attach_isolated(ig)
    cands = find_partial_mappings(linked, cg, limit=limit, budget=budget, n_logical=lc.n_qubits)
    return select_initial(cands, ig, lc, cg)
