"""Pricing for the path formulation: weight-budgeted cheapest paths.

A pricing problem asks, for one terminal pair, for simple u-v paths whose
total edge cost (sparse nonnegative costs, absent entries are 0) is
strictly below a cap while the total edge weight stays within the pair
budget. The column generation loop wants the first few entries of the
Pareto front over (cost, weight): strictly increasing cost, strictly
decreasing weight, emitted in cost order, one path per value pair.

Two searches implement this:

* cheapest_feasible_path: one-directional label setting with per-node
  Pareto label lists and a weight-to-target lower bound for early
  discarding. Returns at most the single front head.
* bidirectional_front_search: simultaneous searches from both endpoints
  guided by four exact lower bounds (cost-to-go and weight-to-go from
  either side), joining labels where the searches meet, yielding up to mu
  front entries. mu=None exhausts the front.

The cache remembers, per pair, the last (costs, cap) combination that
produced no path; a new call may be skipped when its cap is no larger and
every edge cost is no smaller, since both changes only shrink the set of
acceptable paths.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field

from .graph import DIST_TOL, WeightedGraph, dijkstra

INF = math.inf

# strict "<" against the cost cap gets a safety margin so float noise in
# duals cannot spin the generation loop
COST_EPS = 1e-9


@dataclass
class PricingProblem:
    u: int
    v: int
    budget: float
    cost_cap: float
    edge_cost: dict[int, float]
    mu: int | None = 1


@dataclass(frozen=True)
class PricedPath:
    edges: tuple[int, ...]
    cost: float
    weight: float


class _Staircase:
    """Pareto label list at one node: costs ascending, weights strictly
    descending. Weak dominance: an incoming (cost, weight) pair is rejected
    when an entry is <= in both coordinates."""

    __slots__ = ("costs", "weights")

    def __init__(self):
        self.costs: list[float] = []
        self.weights: list[float] = []

    def dominated(self, cost: float, weight: float) -> bool:
        idx = bisect.bisect_right(self.costs, cost)
        return idx > 0 and self.weights[idx - 1] <= weight

    def insert(self, cost: float, weight: float) -> None:
        idx = bisect.bisect_left(self.costs, cost)
        # drop entries this one dominates (cost >= ours and weight >= ours)
        j = idx
        while j < len(self.costs) and self.weights[j] >= weight:
            j += 1
        self.costs[idx:j] = [cost]
        self.weights[idx:j] = [weight]


def _edge_cost_vector(g: WeightedGraph, edge_cost: dict[int, float]) -> list[float]:
    costs = [0.0] * g.m
    for e, c in edge_cost.items():
        if c < -COST_EPS:
            raise ValueError(f"negative pricing cost on edge {e}: {c}")
        costs[e] = max(c, 0.0)
    return costs


def _budget_tol(g: WeightedGraph, budget: float) -> float:
    return 0 if g.integral and float(budget).is_integer() else DIST_TOL


class _Label:
    __slots__ = ("cost", "weight", "node", "eid", "parent")

    def __init__(self, cost, weight, node, eid, parent):
        self.cost = cost
        self.weight = weight
        self.node = node
        self.eid = eid
        self.parent = parent

    def path_edges(self) -> list[int]:
        out = []
        lab = self
        while lab.eid >= 0:
            out.append(lab.eid)
            lab = lab.parent
        out.reverse()
        return out

    def path_nodes(self, g: WeightedGraph) -> set[int]:
        nodes = {self.node}
        lab = self
        node = self.node
        while lab.eid >= 0:
            node = g.other_end(lab.eid, node)
            nodes.add(node)
            lab = lab.parent
        return nodes


def cheapest_feasible_path(
    g: WeightedGraph,
    prob: PricingProblem,
    weight_to_target: list[float] | None = None,
) -> list[PricedPath]:
    """Cheapest budget-feasible path under the cap; minimal weight among
    equal-cost ones. Empty list when no path qualifies."""
    costs = _edge_cost_vector(g, prob.edge_cost)
    if weight_to_target is None:
        weight_to_target = dijkstra(g, prob.v)
    tol = _budget_tol(g, prob.budget)
    if weight_to_target[prob.u] > prob.budget + tol:
        return []
    stairs = [_Staircase() for _ in range(g.n)]
    root = _Label(0.0, 0.0, prob.u, -1, None)
    heap: list[tuple[float, float, int, _Label]] = [(0.0, 0.0, 0, root)]
    counter = 1
    while heap:
        cost, weight, _, lab = heapq.heappop(heap)
        if cost >= prob.cost_cap - COST_EPS:
            break
        node = lab.node
        if node == prob.v:
            return [PricedPath(tuple(lab.path_edges()), cost, weight)]
        # re-check: entries may have arrived after this label was pushed
        if stairs[node].dominated(cost, weight):
            continue
        stairs[node].insert(cost, weight)
        for nbr, eid in g.neighbors(node):
            nw = weight + g.weights[eid]
            if nw + weight_to_target[nbr] > prob.budget + tol:
                continue
            nc = cost + costs[eid]
            if nc >= prob.cost_cap - COST_EPS:
                continue
            if stairs[nbr].dominated(nc, nw):
                continue
            heapq.heappush(heap, (nc, nw, counter, _Label(nc, nw, nbr, eid, lab)))
            counter += 1
    return []


def bidirectional_front_search(
    g: WeightedGraph,
    prob: PricingProblem,
    weight_from_u: list[float] | None = None,
    weight_from_v: list[float] | None = None,
) -> list[PricedPath]:
    """First mu Pareto-front entries over (cost, weight), cheapest first.

    Forward labels grow from u, backward labels from v; the side whose
    cheapest estimate is smaller advances (a single heap keyed by
    (estimated total cost, estimated total weight) realizes that rule).
    Settling a label joins it against the opposite side's settled labels
    at the same node; a join becomes a candidate path once simple. A
    candidate is emitted when no open label could still complete to a
    lexicographically smaller (cost, weight) value.
    """
    mu = prob.mu
    if mu is not None and mu <= 0:
        return []
    costs = _edge_cost_vector(g, prob.edge_cost)
    cost_from_u = dijkstra(g, prob.u, costs)
    cost_from_v = dijkstra(g, prob.v, costs)
    if weight_from_u is None:
        weight_from_u = dijkstra(g, prob.u)
    if weight_from_v is None:
        weight_from_v = dijkstra(g, prob.v)
    tol = _budget_tol(g, prob.budget)
    if weight_from_v[prob.u] > prob.budget + tol:
        return []

    cost_bound = (cost_from_v, cost_from_u)   # per direction: to the far terminal
    weight_bound = (weight_from_v, weight_from_u)
    settled: tuple[list[list[_Label]], list[list[_Label]]] = (
        [[] for _ in range(g.n)],
        [[] for _ in range(g.n)],
    )
    stairs = ([_Staircase() for _ in range(g.n)], [_Staircase() for _ in range(g.n)])

    fwd = _Label(0.0, 0.0, prob.u, -1, None)
    bwd = _Label(0.0, 0.0, prob.v, -1, None)
    heap: list[tuple[float, float, int, int, _Label]] = []
    heapq.heappush(heap, (cost_from_v[prob.u], weight_from_v[prob.u], 0, 0, fwd))
    heapq.heappush(heap, (cost_from_u[prob.v], weight_from_u[prob.v], 1, 1, bwd))
    counter = 2

    # candidate complete paths: (cost, weight, edge sequence)
    candidates: list[tuple[float, float, tuple[int, ...]]] = []
    front: list[PricedPath] = []
    last_weight = INF

    def flush(open_key: tuple[float, float] | None) -> bool:
        """Emit ready candidates; True when the front is full."""
        nonlocal last_weight
        while candidates:
            cost, weight, edges = candidates[0]
            if open_key is not None and (cost, weight) > open_key:
                return False
            heapq.heappop(candidates)
            if weight >= last_weight or (front and cost <= front[-1].cost):
                continue  # dominated by or tied with an emitted entry
            front.append(PricedPath(edges, cost, weight))
            last_weight = weight
            if mu is not None and len(front) >= mu:
                return True
        return False

    while heap:
        est_c, est_w, _, side, lab = heapq.heappop(heap)
        if est_c >= prob.cost_cap - COST_EPS:
            break
        if est_w > prob.budget + tol or est_w >= last_weight:
            continue
        if flush((est_c, est_w)):
            return front
        node = lab.node
        if stairs[side][node].dominated(lab.cost, lab.weight):
            continue
        stairs[side][node].insert(lab.cost, lab.weight)
        settled[side][node].append(lab)

        # join against the other side's labels settled at this node
        own_nodes = None
        for other in settled[1 - side][node]:
            cost = lab.cost + other.cost
            weight = lab.weight + other.weight
            if cost >= prob.cost_cap - COST_EPS or weight > prob.budget + tol or weight >= last_weight:
                continue
            if own_nodes is None:
                own_nodes = lab.path_nodes(g)
            other_nodes = other.path_nodes(g)
            if len(own_nodes & other_nodes) != 1:
                continue
            fwd_lab, bwd_lab = (lab, other) if side == 0 else (other, lab)
            edges = tuple(fwd_lab.path_edges() + bwd_lab.path_edges()[::-1])
            heapq.heappush(candidates, (cost, weight, edges))

        for nbr, eid in g.neighbors(node):
            nw = lab.weight + g.weights[eid]
            wb = weight_bound[side][nbr]
            if nw + wb > prob.budget + tol or nw + wb >= last_weight:
                continue
            nc = lab.cost + costs[eid]
            if nc + cost_bound[side][nbr] >= prob.cost_cap - COST_EPS:
                continue
            if stairs[side][nbr].dominated(nc, nw):
                continue
            heapq.heappush(
                heap,
                (nc + cost_bound[side][nbr], nw + wb, counter, side, _Label(nc, nw, nbr, eid, lab)),
            )
            counter += 1

    flush(None)
    return front


@dataclass
class PricingCache:
    """Per-pair memory of the last fruitless pricing call."""

    entries: dict[int, tuple[float, dict[int, float]]] = field(default_factory=dict)
    hits: int = 0

    def should_skip(self, pair_idx: int, prob: PricingProblem) -> bool:
        """True when the recorded call already proved this one fruitless:
        cap no larger, every edge cost no smaller (absent = 0)."""
        ent = self.entries.get(pair_idx)
        if ent is None:
            return False
        cap0, cost0 = ent
        if prob.cost_cap > cap0:
            return False
        for e in cost0.keys() | prob.edge_cost.keys():
            if prob.edge_cost.get(e, 0.0) < cost0.get(e, 0.0):
                return False
        self.hits += 1
        return True

    def record_zero(self, pair_idx: int, prob: PricingProblem) -> None:
        self.entries[pair_idx] = (prob.cost_cap, dict(prob.edge_cost))

    def clear(self) -> None:
        self.entries.clear()
