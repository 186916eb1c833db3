"""Undirected weighted graphs and the shortest-path primitives the solvers share.

Graphs are simple (no loops, no parallel edges) with strictly positive
weights. Nodes are 0-based ints; edge ids are assigned in input order and
stay stable for the lifetime of the graph, so branching decisions and
solution reports can refer to them.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

INF = math.inf

# Tolerance for comparisons between float distances / budgets. Integer
# weights never need it (sums stay exact in float64 at these scales).
DIST_TOL = 1e-9


class GraphError(ValueError):
    """Invalid graph input or an operation on an unsuitable graph."""


class WeightedGraph:
    """Forward-star adjacency over an undirected simple weighted graph."""

    __slots__ = ("n", "m", "edges", "weights", "integral", "_first", "_adj_node", "_adj_edge")

    def __init__(self, n: int, edges: list[tuple[int, int]], weights: list[float]):
        self.n = n
        self.m = len(edges)
        self.edges = edges
        self.weights = weights
        self.integral = all(float(w).is_integer() for w in weights)

        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        first = [0] * (n + 1)
        for i in range(n):
            first[i + 1] = first[i] + deg[i]
        pos = first[:]
        adj_node = [0] * (2 * self.m)
        adj_edge = [0] * (2 * self.m)
        for eid, (u, v) in enumerate(edges):
            adj_node[pos[u]] = v
            adj_edge[pos[u]] = eid
            pos[u] += 1
            adj_node[pos[v]] = u
            adj_edge[pos[v]] = eid
            pos[v] += 1
        self._first = first
        self._adj_node = adj_node
        self._adj_edge = adj_edge

    def degree(self, u: int) -> int:
        return self._first[u + 1] - self._first[u]

    def neighbors(self, u: int):
        """Yield (neighbor, edge id) pairs in insertion order."""
        first, adj_node, adj_edge = self._first, self._adj_node, self._adj_edge
        for i in range(first[u], first[u + 1]):
            yield adj_node[i], adj_edge[i]

    def other_end(self, eid: int, u: int) -> int:
        a, b = self.edges[eid]
        return b if u == a else a

    def total_weight(self, edge_ids) -> float:
        return sum(self.weights[e] for e in edge_ids)

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Sequence[tuple[int, int, float]]) -> WeightedGraph:
    """Validate an edge list (u, v, w) and build the forward-star graph.

    Raises GraphError naming the offending edge on: node id out of range,
    self loop, duplicate edge, or non-positive weight.
    """
    if n <= 0:
        raise GraphError(f"node count must be positive, got {n}")
    pairs: list[tuple[int, int]] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()
    for idx, (u, v, w) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {idx} ({u},{v}): node id out of range [0,{n})")
        if u == v:
            raise GraphError(f"edge {idx} ({u},{v}): self loops not allowed")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"edge {idx} ({u},{v}): duplicate of an earlier edge")
        if not (w > 0):
            raise GraphError(f"edge {idx} ({u},{v}): weight must be positive, got {w!r}")
        seen.add(key)
        pairs.append((u, v))
        weights.append(int(w) if float(w).is_integer() else float(w))
    return WeightedGraph(n, pairs, weights)


def _edge_costs(g: WeightedGraph, cost_override) -> Sequence[float]:
    """Resolve the effective per-edge cost vector for a search.

    cost_override may be None (use weights), a full sequence of length m
    (replaces every weight), or a mapping edge id -> cost (edges absent
    from the mapping keep their weight).
    """
    if cost_override is None:
        return g.weights
    if isinstance(cost_override, Mapping):
        costs = list(g.weights)
        for e, c in cost_override.items():
            costs[e] = c
        return costs
    if len(cost_override) != g.m:
        raise GraphError(f"cost vector has length {len(cost_override)}, expected {g.m}")
    return cost_override


def dijkstra(
    g: WeightedGraph,
    source: int,
    cost_override=None,
    target: int | None = None,
    limit: float = INF,
    forbidden_edges: frozenset[int] | set[int] | None = None,
) -> list[float]:
    """Single-source shortest distances under (possibly overridden) costs.

    Stops early once `target` is settled or every unsettled node exceeds
    `limit`. Edges listed in `forbidden_edges` are skipped entirely.
    Unreachable nodes get math.inf.
    """
    costs = _edge_costs(g, cost_override)
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    heap: list[tuple[float, int]] = [(0, source)]
    first, adj_node, adj_edge = g._first, g._adj_node, g._adj_edge
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if target is not None and u == target:
            break
        if d > limit:
            break
        for i in range(first[u], first[u + 1]):
            eid = adj_edge[i]
            if forbidden_edges is not None and eid in forbidden_edges:
                continue
            nd = d + costs[eid]
            v = adj_node[i]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra_tree(
    g: WeightedGraph,
    source: int,
    cost_override=None,
    forbidden_edges: frozenset[int] | set[int] | None = None,
) -> tuple[list[float], list[int]]:
    """Like dijkstra() but also returns the parent edge id per node (-1 at
    the source and at unreachable nodes). Ties are broken toward the smaller
    parent edge id so reconstructed paths are deterministic."""
    costs = _edge_costs(g, cost_override)
    dist: list[float] = [INF] * g.n
    parent: list[int] = [-1] * g.n
    dist[source] = 0
    heap: list[tuple[float, int]] = [(0, source)]
    first, adj_node, adj_edge = g._first, g._adj_node, g._adj_edge
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for i in range(first[u], first[u + 1]):
            eid = adj_edge[i]
            if forbidden_edges is not None and eid in forbidden_edges:
                continue
            nd = d + costs[eid]
            v = adj_node[i]
            if nd < dist[v] or (nd == dist[v] and parent[v] > eid >= 0 and nd < INF):
                if nd < dist[v]:
                    heapq.heappush(heap, (nd, v))
                dist[v] = nd
                parent[v] = eid
    return dist, parent


def path_from_tree(g: WeightedGraph, parent: list[int], source: int, target: int) -> list[int] | None:
    """Edge-id path source -> target out of a dijkstra_tree parent array."""
    if source == target:
        return []
    if parent[target] < 0:
        return None
    path = []
    u = target
    while u != source:
        eid = parent[u]
        path.append(eid)
        u = g.other_end(eid, u)
    path.reverse()
    return path


class DistanceMatrix:
    """All-pairs shortest distances; integer dtype when weights are integral."""

    def __init__(self, dist: np.ndarray, integral: bool):
        self.dist = dist
        self.integral = integral

    def __getitem__(self, key: tuple[int, int]):
        v = self.dist[key]
        return int(v) if self.integral else float(v)

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def all_pairs_distances(g: WeightedGraph, require_connected: bool = True) -> DistanceMatrix:
    """Run Dijkstra from every node. Raises GraphError on a disconnected
    graph unless require_connected is False."""
    out = np.empty((g.n, g.n), dtype=np.int64 if g.integral else np.float64)
    for s in range(g.n):
        row = dijkstra(g, s)
        if require_connected:
            for v, d in enumerate(row):
                if d == INF:
                    raise GraphError(f"graph is disconnected: no path from {s} to {v}")
        out[s, :] = row
    return DistanceMatrix(out, g.integral)


def is_connected(g: WeightedGraph) -> bool:
    if g.n == 1:
        return True
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for v, _ in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


def metricate(g: WeightedGraph, dist: DistanceMatrix | None = None) -> tuple[WeightedGraph, list[int]]:
    """Drop every edge strictly heavier than the shortest distance between
    its endpoints. Ties (w == d) are kept. Returns the reduced graph (edge
    ids reassigned in surviving input order) plus the removed original ids;
    the subgraph preserves all shortest distances, hence is idempotent.
    """
    if dist is None:
        dist = all_pairs_distances(g)
    removed: list[int] = []
    kept: list[tuple[int, int, float]] = []
    for eid, (u, v) in enumerate(g.edges):
        w = g.weights[eid]
        if w > dist[u, v] + (0 if g.integral else DIST_TOL):
            removed.append(eid)
        else:
            kept.append((u, v, w))
    if not removed:
        return g, []
    return build_graph(g.n, kept), removed


def kept_edge_mapping(g: WeightedGraph, removed: list[int]) -> list[int]:
    """New edge id -> original edge id after metricate() removed `removed`."""
    gone = set(removed)
    return [eid for eid in range(g.m) if eid not in gone]


@dataclass(frozen=True)
class TerminalPair:
    """A node pair whose stretch is enforced: d_H(u,v) must stay <= budget."""

    u: int
    v: int
    dist: float
    budget: float


def build_terminal_pairs(
    g: WeightedGraph,
    alpha: float,
    mode: str = "adjacent",
    dist: DistanceMatrix | None = None,
) -> list[TerminalPair]:
    """Terminal pairs with budgets alpha * d_G(u,v).

    mode "adjacent" enforces stretch only for endpoint pairs of edges
    (which is enough to bound the stretch of every pair); mode "all"
    enforces it for every node pair explicitly.
    """
    if alpha < 1:
        raise GraphError(f"stretch factor must be >= 1, got {alpha}")
    if mode not in ("adjacent", "all"):
        raise GraphError(f"unknown pair mode {mode!r}")
    if dist is None:
        dist = all_pairs_distances(g)
    pairs: list[TerminalPair] = []
    if mode == "adjacent":
        seen: set[tuple[int, int]] = set()
        for u, v in g.edges:
            key = (u, v) if u < v else (v, u)
            if key not in seen:
                seen.add(key)
                d = dist[key[0], key[1]]
                pairs.append(TerminalPair(key[0], key[1], d, alpha * d))
    else:
        for u in range(g.n):
            for v in range(u + 1, g.n):
                d = dist[u, v]
                if d == INF:
                    raise GraphError(f"pair ({u},{v}) is disconnected")
                pairs.append(TerminalPair(u, v, d, alpha * d))
    return pairs
