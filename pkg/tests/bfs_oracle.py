"""Exhaustive minimum-SWAP routing by breadth-first search.

A state is (placement, executed gates). Any gate whose predecessors have
all run and whose qubits sit on adjacent physical qubits runs for free, so
every state is closed under free execution before expansion. Each edge of
the search graph is one SWAP on a device edge.
"""

from collections import deque


def _predecessors(pairs):
    preds = []
    last = {}
    for i, (a, b) in enumerate(pairs):
        preds.append({last[q] for q in (a, b) if q in last})
        last[a] = last[b] = i
    return preds


def min_swaps(pairs, placement, edges):
    """Fewest SWAPs needed to run ``pairs`` starting from ``placement``.

    ``placement[l]`` is the physical qubit of logical ``l`` and ``edges`` is
    a collection of undirected physical pairs.
    """
    adj = {frozenset(e) for e in edges}
    preds = _predecessors(pairs)
    n = len(pairs)
    full = (1 << n) - 1

    def close(place, done):
        changed = True
        while changed:
            changed = False
            for i, (a, b) in enumerate(pairs):
                if done >> i & 1:
                    continue
                if all(done >> p & 1 for p in preds[i]) and frozenset((place[a], place[b])) in adj:
                    done |= 1 << i
                    changed = True
        return done

    start = (tuple(placement), close(placement, 0))
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (place, done), cost = queue.popleft()
        if done == full:
            return cost
        where = {p: l for l, p in enumerate(place)}
        for e in adj:
            u, v = tuple(e)
            nxt = list(place)
            if u in where:
                nxt[where[u]] = v
            if v in where:
                nxt[where[v]] = u
            nxt = tuple(nxt)
            state = (nxt, close(nxt, done))
            if state not in seen:
                seen.add(state)
                queue.append((state, cost + 1))
    raise ValueError("unreachable")
