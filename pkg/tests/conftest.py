"""Shared graph builders for the test suite.

The tiny named graphs below are used throughout: a 2-edge path, the unit
4-cycle, the unit triangle, a weighted triangle whose long edge ties the
detour, and the 15-edge subdivision witness.
"""

import itertools

import numpy as np
import pytest

from spannerkit.graph import WeightedGraph, build_graph


def p3() -> WeightedGraph:
    return build_graph(3, [(0, 1, 1), (1, 2, 1)])


def c4() -> WeightedGraph:
    return build_graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])


def k3() -> WeightedGraph:
    return build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


def triangle_112() -> WeightedGraph:
    # edge ids: 0 = {0,1} w1, 1 = {1,2} w1, 2 = {0,2} w2
    return build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])


def triangle_113() -> WeightedGraph:
    return build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])


def k5sub() -> WeightedGraph:
    edges = [(i, (i + 1) % 10, 1) for i in range(10)]
    edges += [(0, 4, 1), (2, 6, 1), (4, 8, 1), (0, 6, 1), (2, 8, 1)]
    return build_graph(10, edges)


def random_connected_graph(rng, n, p=0.5, weight="wn"):
    """Seeded Erdos-Renyi graph, resampled until connected.

    Independent of the instances module so generator tests have a second
    route to random graphs.
    """
    while True:
        edges = []
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < p:
                if weight == "wn":
                    w = float(rng.integers(1, n + 1))
                elif weight == "w1":
                    w = 1.0
                else:
                    w = float(rng.uniform(0.1, 2.0))
                edges.append((u, v, w))
        if len(edges) < n - 1:
            continue
        g = build_graph(n, edges)
        if _connected(g):
            return g


def _connected(g: WeightedGraph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v, _ in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
