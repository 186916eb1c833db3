"""Greedy spanner heuristic and the stretch verification oracle."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import DIST_TOL, INF, DistanceMatrix, WeightedGraph, all_pairs_distances, build_terminal_pairs


@dataclass
class SpannerSolution:
    edge_ids: tuple[int, ...]
    total_weight: float
    alpha: float


@dataclass
class VerifyReport:
    feasible: bool
    worst_pair: tuple[int, int] | None
    worst_distance: float
    worst_budget: float

    @property
    def worst_excess(self) -> float:
        return self.worst_distance - self.worst_budget


def _bounded_distance(adj: list[list[tuple[int, float]]], source: int, target: int, limit: float) -> float:
    """Shortest distance in an adjacency-list subgraph, abandoning the
    search once every frontier entry exceeds limit."""
    dist: dict[int, float] = {source: 0}
    heap: list[tuple[float, int]] = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, INF):
            continue
        if u == target:
            return d
        if d > limit:
            break
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, INF) and nd <= limit:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist.get(target, INF)


def basic_greedy(g: WeightedGraph, alpha: float) -> SpannerSolution:
    """Scan edges by nondecreasing weight (ties by edge id) and keep an edge
    exactly when the current subgraph stretches its endpoints too far.

    The result satisfies the stretch bound for every node pair, not just
    edge endpoints: any shortest path's edges are each either kept or
    already spanned within factor alpha, and stitching those detours
    together multiplies the pair distance by at most alpha.
    """
    order = sorted(range(g.m), key=lambda e: (g.weights[e], e))
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    kept: list[int] = []
    total = 0
    for eid in order:
        u, v = g.edges[eid]
        w = g.weights[eid]
        limit = alpha * w + (0 if g.integral and float(alpha * w).is_integer() else DIST_TOL)
        if _bounded_distance(adj, u, v, limit) > limit:
            kept.append(eid)
            total += w
            adj[u].append((v, w))
            adj[v].append((u, w))
    kept.sort()
    return SpannerSolution(tuple(kept), total, alpha)


def verify_spanner(
    g: WeightedGraph,
    alpha: float,
    edge_ids,
    mode: str = "all",
    dist: DistanceMatrix | None = None,
) -> VerifyReport:
    """Check d_H(u,v) <= alpha * d_G(u,v) (+1e-9) over the requested pairs.

    mode "all" checks every node pair, "adjacent" only edge endpoint pairs.
    Reports the worst pair by absolute excess over its budget.
    """
    if dist is None:
        dist = all_pairs_distances(g)
    pairs = build_terminal_pairs(g, alpha, mode, dist)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for eid in edge_ids:
        u, v = g.edges[eid]
        w = g.weights[eid]
        adj[u].append((v, w))
        adj[v].append((u, w))

    by_source: dict[int, list] = {}
    for p in pairs:
        by_source.setdefault(p.u, []).append(p)

    feasible = True
    worst_pair = None
    worst_d: float = -INF
    worst_b: float = 0.0
    for source, plist in sorted(by_source.items()):
        limit = max(p.budget for p in plist)
        dist_h: dict[int, float] = {source: 0}
        heap: list[tuple[float, int]] = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist_h.get(u, INF):
                continue
            if d > limit + DIST_TOL:
                break
            for v, w in adj[u]:
                nd = d + w
                if nd < dist_h.get(v, INF):
                    dist_h[v] = nd
                    heapq.heappush(heap, (nd, v))
        for p in plist:
            dh = dist_h.get(p.v, INF)
            if dh > p.budget + DIST_TOL:
                feasible = False
            if dh - p.budget > worst_d - worst_b:
                worst_pair, worst_d, worst_b = (p.u, p.v), dh, p.budget
    return VerifyReport(feasible, worst_pair, worst_d, worst_b)


def gap_percent(value: float, bound: float) -> float:
    """Relative optimality gap 100*(value-bound)/bound."""
    if not bound > 0:
        raise ValueError(f"reference bound must be positive, got {bound!r}")
    return 100.0 * (value - bound) / bound
