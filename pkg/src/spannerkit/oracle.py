"""Brute-force optimum by edge-subset enumeration. Desk scale only.

Two reductions keep the enumeration honest but smaller:

* edges heavier than the shortest distance between their endpoints can be
  excluded: swapping such an edge for a shortest path never hurts any
  pair's distance and strictly reduces weight, so no optimal subgraph
  contains one;
* an edge whose sole removal from the reduced edge set already breaks
  feasibility is in every feasible subgraph, hence mandatory.

Subsets of the remaining free edges are then generated lazily in
nondecreasing total weight (heap over extend/replace successors) and the
first feasible one is optimal, because adding edges never hurts
feasibility. A cap on generated subsets raises instead of hanging.
"""

from __future__ import annotations

import heapq
import math

from .graph import DIST_TOL, WeightedGraph, all_pairs_distances, build_terminal_pairs

INF = math.inf


class OracleSizeError(RuntimeError):
    """The instance exceeds what exhaustive enumeration can cover."""


def _feasible(g: WeightedGraph, edge_ids, pairs_by_source, tol: float) -> bool:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for eid in edge_ids:
        u, v = g.edges[eid]
        w = g.weights[eid]
        adj[u].append((v, w))
        adj[v].append((u, w))
    for source, plist, limit in pairs_by_source:
        dist: dict[int, float] = {source: 0}
        heap: list[tuple[float, int]] = [(0, source)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist.get(x, INF):
                continue
            if d > limit + tol:
                break
            for y, w in adj[x]:
                nd = d + w
                if nd < dist.get(y, INF):
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        for p in plist:
            if dist.get(p.v, INF) > p.budget + tol:
                return False
    return True


def _lightest_subsets(weights: list[float], cap: int):
    """Yield index subsets of `weights` in nondecreasing total weight.

    Successors of a subset with largest index i: append i+1, or replace i
    by i+1; both only add weight when sorted ascending, so a heap pops
    subsets in order and each exactly once.
    """
    yield ()
    count = 1
    n = len(weights)
    if n == 0:
        return
    heap: list[tuple[float, tuple[int, ...]]] = [(weights[0], (0,))]
    while heap:
        w, subset = heapq.heappop(heap)
        yield subset
        count += 1
        if count > cap:
            raise OracleSizeError(f"subset enumeration exceeded cap {cap}")
        last = subset[-1]
        if last + 1 < n:
            heapq.heappush(heap, (w + weights[last + 1], subset + (last + 1,)))
            heapq.heappush(heap, (w - weights[last] + weights[last + 1], subset[:-1] + (last + 1,)))


def oracle_optimum(
    g: WeightedGraph,
    alpha: float,
    mode: str = "all",
    max_subsets: int = 2_000_000,
) -> tuple[float, tuple[int, ...]]:
    """Exact minimum spanner weight and one optimal edge set."""
    dist = all_pairs_distances(g)
    pairs = build_terminal_pairs(g, alpha, mode, dist)
    by_source: dict[int, list] = {}
    for p in pairs:
        by_source.setdefault(p.u, []).append(p)
    pairs_by_source = [(s, plist, max(p.budget for p in plist)) for s, plist in sorted(by_source.items())]
    tol = 0 if g.integral and all(float(p.budget).is_integer() for p in pairs) else DIST_TOL

    metric = [
        eid
        for eid, (u, v) in enumerate(g.edges)
        if g.weights[eid] <= dist[u, v] + (0 if g.integral else DIST_TOL)
    ]
    mandatory = [
        eid for eid in metric if not _feasible(g, [e for e in metric if e != eid], pairs_by_source, tol)
    ]
    mand_set = set(mandatory)
    free = [eid for eid in metric if eid not in mand_set]
    # sort free edges ascending so subset enumeration is by total weight
    free.sort(key=lambda e: (g.weights[e], e))
    free_weights = [g.weights[e] for e in free]

    for subset in _lightest_subsets(free_weights, max_subsets):
        chosen = mandatory + [free[i] for i in subset]
        if _feasible(g, chosen, pairs_by_source, tol):
            chosen.sort()
            return g.total_weight(chosen), tuple(chosen)
    raise AssertionError("full metric edge set must be feasible")
