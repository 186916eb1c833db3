"""Greedy spanner construction, stretch verification, gap reporting."""

import math

import pytest

from spannerkit.greedy import basic_greedy, gap_percent, verify_spanner
from spannerkit.oracle import oracle_optimum

from conftest import c4, k5sub, p3, random_connected_graph, triangle_112


def test_bg_p3():
    sol = basic_greedy(p3(), 2.0)
    assert sol.edge_ids == (0, 1)
    assert sol.total_weight == 2


def test_bg_triangle_tie_skips_long_edge():
    # when the weight-2 edge is scanned, the two unit edges already span its
    # endpoints at distance exactly 2 = alpha * w, so it is skipped
    sol = basic_greedy(triangle_112(), 1.0)
    assert sol.edge_ids == (0, 1)
    assert sol.total_weight == 2


def test_bg_c4_keeps_everything():
    sol = basic_greedy(c4(), 2.0)
    assert sol.edge_ids == (0, 1, 2, 3)
    assert sol.total_weight == 4


def test_bg_output_always_feasible(rng):
    for _ in range(15):
        g = random_connected_graph(rng, int(rng.integers(5, 14)))
        alpha = float(rng.choice([1.5, 2.0, 3.0]))
        sol = basic_greedy(g, alpha)
        assert verify_spanner(g, alpha, sol.edge_ids, mode="all").feasible


def test_bg_never_beats_oracle(rng):
    for _ in range(10):
        g = random_connected_graph(rng, int(rng.integers(4, 9)))
        alpha = float(rng.choice([1.5, 2.0, 3.0]))
        best, _ = oracle_optimum(g, alpha)
        sol = basic_greedy(g, alpha)
        assert sol.total_weight >= best - 1e-9


def test_bg_weight_monotone_in_alpha(rng):
    for _ in range(8):
        g = random_connected_graph(rng, 10)
        weights = [basic_greedy(g, a).total_weight for a in (1.0, 1.5, 2.0, 3.0, 5.0)]
        assert all(a >= b - 1e-12 for a, b in zip(weights, weights[1:]))


def test_bg_on_witness():
    sol = basic_greedy(k5sub(), 5.0)
    assert verify_spanner(k5sub(), 5.0, sol.edge_ids, mode="all").feasible
    assert sol.total_weight >= 9  # the exact optimum for this graph


# ---------------------------------------------------------------------------
# verify_spanner


def test_verify_full_edge_set():
    g = c4()
    rep = verify_spanner(g, 2.0, range(g.m))
    assert rep.feasible
    assert rep.worst_distance == rep.worst_budget / 2  # ratio 1 vs budget 2d


def test_verify_c4_missing_edge():
    rep = verify_spanner(c4(), 2.0, [0, 1, 2])
    assert not rep.feasible
    assert rep.worst_pair == (0, 3)
    assert rep.worst_distance == 3
    assert rep.worst_budget == 2


def test_verify_empty_set_infeasible():
    rep = verify_spanner(c4(), 2.0, [])
    assert not rep.feasible
    assert rep.worst_distance == math.inf


def test_verify_adjacent_vs_all():
    g = c4()
    # dropping one edge breaks its endpoint pair in both modes
    for mode in ("adjacent", "all"):
        assert not verify_spanner(g, 2.0, [1, 2, 3], mode=mode).feasible


# ---------------------------------------------------------------------------
# gap_percent


def test_gap_examples():
    assert gap_percent(10, 10) == 0.0
    assert gap_percent(11, 10) == 10.0


def test_gap_rejects_nonpositive_bound():
    with pytest.raises(ValueError):
        gap_percent(5, 0)
    with pytest.raises(ValueError):
        gap_percent(5, -1)


def test_gap_of_bg_vs_oracle_nonnegative(rng):
    for _ in range(8):
        g = random_connected_graph(rng, int(rng.integers(4, 8)))
        best, _ = oracle_optimum(g, 2.0)
        sol = basic_greedy(g, 2.0)
        assert gap_percent(sol.total_weight, best) >= 0
