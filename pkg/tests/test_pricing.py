"""Pricing engines against a brute-force Pareto oracle, plus the skip cache.

Edge costs and caps are drawn from the dyadic grid k/64, and weights are
small integers, so every sum in both the engines and the oracle is exact
in binary floating point; front comparisons below are literal equalities.
"""

import math

import numpy as np
import pytest

from spannerkit.graph import build_graph, dijkstra
from spannerkit.pricing import (
    PricingCache,
    PricingProblem,
    bidirectional_front_search,
    cheapest_feasible_path,
)

from conftest import random_connected_graph

COST_EPS = 1e-9


def three_node_graph():
    # u=0, a=1, v=2; the detour is light on cost, the direct edge on weight
    g = build_graph(3, [(0, 1, 2), (1, 2, 2), (0, 2, 3)])
    costs = {0: 1.0, 1: 1.0, 2: 5.0}
    return g, costs


def test_basic_detour_within_budget():
    g, costs = three_node_graph()
    found = cheapest_feasible_path(g, PricingProblem(0, 2, 4, 6, costs))
    assert len(found) == 1
    assert (found[0].cost, found[0].weight) == (2, 4)
    assert found[0].edges == (0, 1)


def test_basic_budget_forces_direct():
    g, costs = three_node_graph()
    found = cheapest_feasible_path(g, PricingProblem(0, 2, 3, 6, costs))
    assert len(found) == 1
    assert (found[0].cost, found[0].weight) == (5, 3)
    assert found[0].edges == (2,)


def test_basic_cap_is_strict():
    g, costs = three_node_graph()
    assert cheapest_feasible_path(g, PricingProblem(0, 2, 3, 5, costs)) == []


def test_front_mu2():
    g, costs = three_node_graph()
    found = bidirectional_front_search(g, PricingProblem(0, 2, 4, 6, costs, mu=2))
    assert [(p.cost, p.weight) for p in found] == [(2, 4), (5, 3)]


def test_front_mu1():
    g, costs = three_node_graph()
    found = bidirectional_front_search(g, PricingProblem(0, 2, 4, 6, costs, mu=1))
    assert [(p.cost, p.weight) for p in found] == [(2, 4)]


def test_free_minimum_weight_path_closes_the_front():
    """When a weight-shortest path carries zero cost it dominates every
    other feasible path, so even mu > 1 returns just that one entry."""
    g, _ = three_node_graph()
    costs = {0: 1.5, 1: 0.5}  # direct edge (weight-shortest) stays free
    found = bidirectional_front_search(g, PricingProblem(0, 2, 4, 9, costs, mu=3))
    assert [(p.cost, p.weight) for p in found] == [(0, 3)]


def test_negative_cost_rejected():
    g, _ = three_node_graph()
    with pytest.raises(ValueError):
        cheapest_feasible_path(g, PricingProblem(0, 2, 4, 6, {0: -0.5}))


# ---------------------------------------------------------------------------
# brute-force oracle equivalence


def all_simple_paths(g, u, v, budget, tol):
    """DFS enumeration of every simple u-v path with weight <= budget."""
    to_target = dijkstra(g, v)
    out = []

    def walk(node, visited, edges, weight):
        if node == v:
            out.append((tuple(edges), weight))
            return
        for nbr, eid in g.neighbors(node):
            if nbr in visited:
                continue
            nw = weight + g.weights[eid]
            if nw + to_target[nbr] > budget + tol:
                continue
            visited.add(nbr)
            edges.append(eid)
            walk(nbr, visited, edges, nw)
            edges.pop()
            visited.remove(nbr)

    walk(u, {u}, [], 0)
    return out


def oracle_front(g, prob):
    tol = 0 if g.integral and float(prob.budget).is_integer() else 1e-9
    paths = all_simple_paths(g, prob.u, prob.v, prob.budget, tol)
    values = []
    for edges, weight in paths:
        cost = sum(prob.edge_cost.get(e, 0.0) for e in edges)
        if cost < prob.cost_cap - COST_EPS:
            values.append((cost, weight))
    values.sort()
    front = []
    for cost, weight in values:
        if front and (cost == front[-1][0] or weight >= front[-1][1]):
            continue
        front.append((cost, weight))
    return front


def random_problem(rng, g):
    nodes = rng.choice(g.n, size=2, replace=False)
    u, v = int(nodes[0]), int(nodes[1])
    d = dijkstra(g, v)[u]
    budget = d * (1 + int(rng.integers(0, 97)) / 64)
    costs = {}
    for e in range(g.m):
        if rng.random() < 0.7:
            costs[e] = int(rng.integers(0, 193)) / 64
    cap = int(rng.integers(0, 257)) / 64
    return PricingProblem(u, v, budget, cap, costs)


def test_front_oracle_equivalence():
    """Criterion-scale sweep: the search must reproduce the exact Pareto
    prefix for every mu on hundreds of random problems."""
    rng = np.random.default_rng(404)
    problems = 0
    nonempty = 0
    while problems < 520:
        g = random_connected_graph(rng, int(rng.integers(5, 10)))
        for _ in range(6):
            prob = random_problem(rng, g)
            front = oracle_front(g, prob)
            for mu in (1, 2, 3, None):
                prob.mu = mu
                got = bidirectional_front_search(g, prob)
                want = front if mu is None else front[:mu]
                assert [(p.cost, p.weight) for p in got] == want, (prob, mu)
            single = cheapest_feasible_path(g, prob)
            assert [(p.cost, p.weight) for p in single] == front[:1]
            problems += 1
            if front:
                nonempty += 1
    assert nonempty >= 200  # the sampler covers the interesting side


def test_front_shape_invariants():
    rng = np.random.default_rng(405)
    for _ in range(60):
        g = random_connected_graph(rng, 8)
        prob = random_problem(rng, g)
        prob.mu = None
        front = bidirectional_front_search(g, prob)
        costs = [p.cost for p in front]
        weights = [p.weight for p in front]
        assert costs == sorted(costs)
        assert all(a < b for a, b in zip(costs, costs[1:]))
        assert all(a > b for a, b in zip(weights, weights[1:]))
        assert all(p.weight <= prob.budget + 1e-9 for p in front)
        assert all(p.cost < prob.cost_cap - COST_EPS for p in front)
        # returned edge sets really produce the reported sums
        for p in front:
            assert p.cost == sum(prob.edge_cost.get(e, 0.0) for e in p.edges)
            assert p.weight == sum(g.weights[e] for e in p.edges)


def test_free_path_front_is_singleton_when_weight_minimal():
    rng = np.random.default_rng(406)
    seen = 0
    for _ in range(200):
        g = random_connected_graph(rng, 7)
        prob = random_problem(rng, g)
        prob.mu = None
        front = bidirectional_front_search(g, prob)
        if not front or front[0].cost != 0:
            continue
        if front[0].weight == dijkstra(g, prob.v)[prob.u]:
            assert len(front) == 1
            seen += 1
    assert seen >= 5


# ---------------------------------------------------------------------------
# pruning cache


def test_cache_miss_then_hit():
    cache = PricingCache()
    prob = PricingProblem(0, 1, 2, 1.0, {0: 1.0})
    assert not cache.should_skip(0, prob)
    cache.record_zero(0, prob)
    assert cache.should_skip(0, prob)
    assert cache.hits == 1


def test_cache_released_by_larger_cap():
    cache = PricingCache()
    prob = PricingProblem(0, 1, 2, 1.0, {0: 1.0})
    cache.record_zero(0, prob)
    assert not cache.should_skip(0, PricingProblem(0, 1, 2, 1.5, {0: 1.0}))


def test_cache_released_by_lower_cost():
    cache = PricingCache()
    cache.record_zero(0, PricingProblem(0, 1, 2, 1.0, {0: 1.0, 1: 0.5}))
    assert not cache.should_skip(0, PricingProblem(0, 1, 2, 1.0, {0: 1.0, 1: 0.25}))
    # an entry dropping to zero (absent) also releases
    assert not cache.should_skip(0, PricingProblem(0, 1, 2, 1.0, {0: 1.0}))


def test_cache_holds_when_new_cost_appears():
    cache = PricingCache()
    cache.record_zero(0, PricingProblem(0, 1, 2, 1.0, {0: 1.0}))
    assert cache.should_skip(0, PricingProblem(0, 1, 2, 1.0, {0: 1.0, 3: 2.0}))


def test_cache_is_per_pair():
    cache = PricingCache()
    prob = PricingProblem(0, 1, 2, 1.0, {0: 1.0})
    cache.record_zero(0, prob)
    assert not cache.should_skip(1, prob)


def test_cache_skip_always_sound():
    """Whenever the cache says skip, a forced run must come back empty."""
    rng = np.random.default_rng(407)
    skips = 0
    released = 0
    for _ in range(60):
        g = random_connected_graph(rng, 7)
        base = random_problem(rng, g)
        base.cost_cap = int(rng.integers(0, 49)) / 64  # small caps fail often
        base.mu = 3
        cache = PricingCache()
        if bidirectional_front_search(g, base):
            continue
        cache.record_zero(0, base)
        for _ in range(6):
            # mostly tighten (skippable), sometimes loosen (released)
            cap = base.cost_cap * (0.8 if rng.random() < 0.7 else 1.3)
            costs = {
                e: c * (1.5 if rng.random() < 0.85 else 0.5)
                for e, c in base.edge_cost.items()
            }
            variant = PricingProblem(base.u, base.v, base.budget, cap, costs, mu=3)
            if cache.should_skip(0, variant):
                skips += 1
                assert bidirectional_front_search(g, variant) == []
            else:
                released += 1
    assert skips >= 20 and released >= 20
