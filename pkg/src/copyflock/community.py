"""Community detection by greedy agglomerative modularity maximization.

Works on a weighted undirected graph. Starting from singletons, the pair
of connected communities whose merge gives the largest modularity gain is
merged until no merge improves modularity:

    gain(a, b) = w_ab / m - resolution * K_a * K_b / (2 m^2)

with m the total edge weight, K the community degree sums and w_ab the
weight between the two communities. Ties break on the smallest community
id (communities are numbered by their smallest member in sorted node
order and a merge keeps the smaller id), so the result is fully
deterministic for a given graph. Disconnected communities are never
merged because only connected pairs carry a positive gain term.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Sequence

__all__ = ["CommunityAssignment", "greedy_modularity", "modularity_score", "undirected_weights"]


@dataclass(frozen=True)
class CommunityAssignment:
    """Result of one community-detection run.

    ``communities`` maps every node of the input graph to a dense integer
    id; ids are ordered by each community's smallest member. The seed is
    recorded for provenance; the algorithm itself is deterministic and
    does not consume randomness.
    """

    communities: dict[str, int]
    modularity: float
    seed: int = 0
    resolution: float = 1.0
    weighted: bool = True

    @property
    def n_communities(self) -> int:
        return len(set(self.communities.values()))

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, cid in self.communities.items():
            out.setdefault(cid, []).append(node)
        return {cid: sorted(nodes) for cid, nodes in sorted(out.items())}


def undirected_weights(
    edges: Mapping[tuple[str, str], float], weighted: bool = True
) -> dict[tuple[str, str], float]:
    """Collapse directed/duplicated edges onto unordered pairs.

    Opposite directions sum; with ``weighted`` off every directed edge
    counts 1. Self-loops are dropped.
    """
    out: dict[tuple[str, str], float] = {}
    for (a, b), w in edges.items():
        if a == b:
            continue
        key = (a, b) if a <= b else (b, a)
        out[key] = out.get(key, 0.0) + (float(w) if weighted else 1.0)
    return out


def modularity_score(
    partition: Mapping[str, int],
    nodes: Sequence[str],
    weights: Mapping[tuple[str, str], float],
    resolution: float = 1.0,
) -> float:
    """Weighted modularity of a partition (0.0 for an edgeless graph)."""
    m = sum(weights.values())
    if m == 0:
        return 0.0
    internal: dict[int, float] = {}
    degree: dict[int, float] = {}
    for node in nodes:
        degree.setdefault(partition[node], 0.0)
    for (a, b), w in weights.items():
        ca, cb = partition[a], partition[b]
        degree[ca] = degree.get(ca, 0.0) + w
        degree[cb] = degree.get(cb, 0.0) + w
        if ca == cb:
            internal[ca] = internal.get(ca, 0.0) + w
    q = 0.0
    for cid, k in degree.items():
        q += internal.get(cid, 0.0) / m - resolution * (k / (2 * m)) ** 2
    return q


def greedy_modularity(
    nodes: Sequence[str],
    weights: Mapping[tuple[str, str], float],
    resolution: float = 1.0,
) -> tuple[dict[str, int], float]:
    """Partition nodes by greedy modularity merging.

    Returns the node -> dense community id map and the modularity of the
    returned partition. Isolated nodes stay singletons.
    """
    order = sorted(set(nodes))
    pos = {n: i for i, n in enumerate(order)}
    n = len(order)

    pair_w: dict[tuple[int, int], float] = {}
    for (a, b), w in weights.items():
        if a not in pos or b not in pos:
            raise ValueError(f"edge ({a!r}, {b!r}) references a node outside the graph")
        if a == b:
            continue
        i, j = pos[a], pos[b]
        key = (i, j) if i < j else (j, i)
        pair_w[key] = pair_w.get(key, 0.0) + float(w)

    m = sum(pair_w.values())
    if n == 0:
        return {}, 0.0
    if m == 0:
        return {node: i for i, node in enumerate(order)}, 0.0

    degree = [0.0] * n
    adj: list[dict[int, float]] = [dict() for _ in range(n)]
    for (i, j), w in pair_w.items():
        degree[i] += w
        degree[j] += w
        adj[i][j] = adj[i].get(j, 0.0) + w
        adj[j][i] = adj[j].get(i, 0.0) + w

    two_m2 = 2.0 * m * m

    def gain(a: int, b: int) -> float:
        return adj[a][b] / m - resolution * degree[a] * degree[b] / two_m2

    alive = [True] * n
    internal = [0.0] * n
    heap: list[tuple[float, int, int]] = []
    for i, j in pair_w:
        a, b = (i, j) if i < j else (j, i)
        heapq.heappush(heap, (-gain(a, b), a, b))

    parent = list(range(n))
    while heap:
        neg, a, b = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or b not in adj[a]:
            continue
        g = gain(a, b)
        if g != -neg:
            continue  # stale entry; a fresh one is in the heap
        if g <= 0.0:
            break
        # merge b into a (a < b by construction)
        internal[a] += internal[b] + adj[a][b]
        degree[a] += degree[b]
        alive[b] = False
        parent[b] = a
        del adj[a][b]
        for c, w in adj[b].items():
            if c == a:
                continue
            adj[a][c] = adj[a].get(c, 0.0) + w
            adj[c][a] = adj[a][c]
            del adj[c][b]
        adj[b].clear()
        for c in adj[a]:
            lo, hi = (a, c) if a < c else (c, a)
            heapq.heappush(heap, (-gain(lo, hi), lo, hi))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    roots = sorted({find(i) for i in range(n)})
    dense = {root: cid for cid, root in enumerate(roots)}
    assignment = {order[i]: dense[find(i)] for i in range(n)}

    q = 0.0
    for root in roots:
        q += internal[root] / m - resolution * (degree[root] / (2 * m)) ** 2
    return assignment, q
