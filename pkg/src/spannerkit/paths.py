"""Budget-bounded simple path enumeration between a terminal pair.

Best-first search over partial simple paths with the exact remaining
shortest distance as admissible estimate, so paths surface in
nondecreasing total weight; weight ties resolve toward the
lexicographically smallest edge-id sequence. There is no per-node label
cap: pruning relies on the weight budget, which keeps the k-shortest
output an exact prefix of the full bounded enumeration.
"""

from __future__ import annotations

import heapq
import math
from typing import NamedTuple

from .graph import DIST_TOL, TerminalPair, WeightedGraph, dijkstra

INF = math.inf

DEFAULT_PATH_CAP = 10**6


class PathEnumerationOverflow(RuntimeError):
    """More budget-feasible paths than the enumeration cap allows."""


class BoundedPath(NamedTuple):
    edges: tuple[int, ...]
    weight: float


def k_shortest_bounded(
    g: WeightedGraph,
    pair: TerminalPair,
    k: int | None,
    dist_to_target: list[float] | None = None,
    max_paths: int = DEFAULT_PATH_CAP,
) -> list[BoundedPath]:
    """Up to k lightest simple u-v paths with weight <= budget (+1e-9).

    k=None enumerates every feasible path (subject to max_paths, which
    raises PathEnumerationOverflow when exceeded). Output is sorted by
    (weight, edge sequence) and is a prefix of the k=None output.
    """
    u, v, budget = pair.u, pair.v, pair.budget
    if dist_to_target is None:
        dist_to_target = dijkstra(g, v)
    tol = 0 if g.integral and float(budget).is_integer() else DIST_TOL
    if dist_to_target[u] > budget + tol:
        return []
    out: list[BoundedPath] = []
    # label: (estimated total, edge sequence, node, weight so far, on-path nodes)
    heap: list[tuple[float, tuple[int, ...], int, float, frozenset[int]]] = [
        (dist_to_target[u], (), u, 0, frozenset((u,)))
    ]
    while heap:
        est, edges, node, weight, visited = heapq.heappop(heap)
        if node == v:
            if len(out) >= max_paths:
                raise PathEnumerationOverflow(
                    f"more than {max_paths} paths within budget {budget} for pair ({u},{v})"
                )
            out.append(BoundedPath(edges, weight))
            if k is not None and len(out) >= k:
                return out
            continue
        for nbr, eid in g.neighbors(node):
            if nbr in visited:
                continue
            nw = weight + g.weights[eid]
            if nw + dist_to_target[nbr] > budget + tol:
                continue
            heapq.heappush(heap, (nw + dist_to_target[nbr], edges + (eid,), nbr, nw, visited | {nbr}))
    return out


def enumerate_all_bounded(
    g: WeightedGraph,
    pair: TerminalPair,
    dist_to_target: list[float] | None = None,
    max_paths: int = DEFAULT_PATH_CAP,
) -> list[BoundedPath]:
    """All simple u-v paths within the pair budget, lightest first."""
    return k_shortest_bounded(g, pair, None, dist_to_target, max_paths)


def unique_path_detect(
    g: WeightedGraph,
    pair: TerminalPair,
    dist_to_target: list[float] | None = None,
) -> BoundedPath | None:
    """The pair's only budget-feasible path, or None if there are >= 2 (or 0)."""
    found = k_shortest_bounded(g, pair, 2, dist_to_target)
    if len(found) == 1:
        return found[0]
    return None
