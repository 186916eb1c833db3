"""Arc-based multicommodity-flow MILP: model shape, fixing, solves, export."""

import json

import pytest

from spannerkit.arcflow import (
    ArcConfig,
    ArcModelError,
    build_ab_model,
    export_lp,
    solve_ab_model,
    solve_arc_based,
)
from spannerkit.colgen import PathBasedSolver, SolverConfig, solve_path_based
from spannerkit.lp import read_lp_file
from spannerkit.oracle import oracle_optimum
from spannerkit.result import BOUND_ONLY, OPTIMAL

from conftest import c4, k5sub, p3, random_connected_graph, triangle_112

TOL = 1e-6


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        ArcConfig(alpha=0.9).validate()
    with pytest.raises(ValueError):
        ArcConfig(alpha=2.0, outflow_rhs="loose").validate()
    with pytest.raises(ArcModelError):
        build_ab_model(c4(), 0.5)


# -- model construction ------------------------------------------------------


def test_cycle_without_fixing_has_half_integral_root():
    model = build_ab_model(
        c4(), 2.0, fix_unreachable=False, fix_mandatory=False, bg_bound=False
    )
    # 4 edge variables plus 4 pairs x 8 directed arcs
    assert model.lp.num_cols == 36
    assert model.stats.flow_vars_created == 32
    assert model.stats.flow_vars_omitted == 0
    sol = model.lp.solve()
    assert sol.objective == pytest.approx(2.0, abs=TOL)
    for var in model.edge_vars:
        assert sol.x[var] == pytest.approx(0.5, abs=1e-6)


def test_cycle_unreachable_fixing_recovers_path_root():
    model = build_ab_model(c4(), 2.0, fix_mandatory=False, bg_bound=False)
    # each pair keeps only its direct edge; 3 detour edges x 2 arcs omitted
    assert model.stats.flow_vars_omitted == 24
    assert model.stats.flow_vars_created == 8
    sol = model.lp.solve()
    path_root, _ = PathBasedSolver(c4(), SolverConfig(alpha=2.0)).solve_root()
    assert sol.objective == pytest.approx(4.0, abs=TOL)
    assert sol.objective == pytest.approx(path_root.objective, abs=TOL)


def test_witness_fixing_is_inert_and_root_stays_at_five():
    # every edge of the subdivided ring lies on a within-budget path in some
    # orientation, so unreachability removes nothing and no direction is
    # mandatory; the half-flow point on the ring keeps the relaxation at 5
    # while the true optimum is 9
    model = build_ab_model(k5sub(), 5.0)
    assert model.stats.flow_vars_omitted == 0
    assert model.stats.vars_fixed_one == 0
    assert model.stats.flow_vars_created == 450
    sol = model.lp.solve()
    assert sol.objective == pytest.approx(5.0, abs=TOL)


def test_fixed_variable_ledger_is_json_with_reasons():
    model = build_ab_model(c4(), 2.0)
    entries = json.loads(model.ledger_json())
    assert entries
    assert all(set(e) == {"var", "value", "reason"} for e in entries)
    reasons = {e["reason"] for e in entries}
    assert any(r == "unreachable" for r in reasons)
    assert any(r.startswith("mandatory_edge") for r in reasons)
    zeroed = sum(1 for e in entries if e["value"] == 0)
    assert zeroed == model.stats.flow_vars_omitted
    ones = sum(1 for e in entries if e["value"] == 1)
    assert ones == model.stats.vars_fixed_one


# -- solves ------------------------------------------------------------------


def test_solve_path_graph():
    result = solve_arc_based(p3(), ArcConfig(alpha=2.0))
    assert result.status == OPTIMAL
    assert result.primal == pytest.approx(2.0, abs=TOL)


def test_solve_triangle_matches_oracle():
    result = solve_arc_based(triangle_112(), ArcConfig(alpha=1.0))
    weight, _ = oracle_optimum(triangle_112(), 1.0)
    assert result.status == OPTIMAL
    assert result.primal == pytest.approx(weight, abs=TOL)
    assert result.solution.edge_ids == (0, 1)


def test_solve_cycle_agrees_with_path_solver_and_oracle():
    arc = solve_arc_based(c4(), ArcConfig(alpha=2.0))
    path = solve_path_based(c4(), SolverConfig(alpha=2.0))
    weight, _ = oracle_optimum(c4(), 2.0)
    assert arc.status == path.status == OPTIMAL
    assert arc.primal == pytest.approx(weight, abs=TOL)
    assert path.primal == pytest.approx(weight, abs=TOL)


def test_node_limit_reports_greedy_incumbent():
    result = solve_arc_based(c4(), ArcConfig(alpha=2.0, node_limit=0))
    assert result.status == BOUND_ONLY
    assert result.primal == pytest.approx(4.0, abs=TOL)
    assert result.dual == 0.0


# -- LP export ---------------------------------------------------------------


def test_export_keeps_every_variable(tmp_path):
    model = build_ab_model(
        c4(), 2.0, fix_unreachable=False, fix_mandatory=False, bg_bound=False
    )
    target = tmp_path / "cycle.lp"
    export_lp(model, str(target))
    text = target.read_text()
    again = read_lp_file(str(target))
    assert again.num_cols == model.lp.num_cols == 36
    assert again.num_rows == model.lp.num_rows
    assert again.row_sense == model.lp.row_sense
    # flow names encode pair endpoints and arc direction
    assert "f_0_1_0_1" in text and "f_0_1_1_0" in text


def test_export_writes_fixed_variables_in_bounds(tmp_path):
    model = build_ab_model(c4(), 2.0)
    target = tmp_path / "fixed.lp"
    export_lp(model, str(target))
    bounds = target.read_text().split("Bounds")[1]
    assert "x_0 = 1" in bounds
    again = read_lp_file(str(target))
    idx = again.col_names.index("x_0")
    assert (again.lo[idx], again.hi[idx]) == (1.0, 1.0)


# -- invariants --------------------------------------------------------------


def test_arc_root_never_exceeds_path_root(rng):
    for _ in range(6):
        g = random_connected_graph(rng, int(rng.integers(4, 8)))
        alpha = float(rng.choice([1.5, 2.0, 3.0]))
        arc = solve_arc_based(g, ArcConfig(alpha=alpha))
        path_sol, _ = PathBasedSolver(g, SolverConfig(alpha=alpha)).solve_root()
        assert arc.stats.root_lp_value is not None
        assert arc.stats.root_lp_value <= path_sol.objective + TOL


def test_optimum_agreement_with_path_solver_and_oracle(rng):
    for _ in range(6):
        g = random_connected_graph(rng, int(rng.integers(4, 8)))
        alpha = float(rng.choice([1.5, 2.0, 3.0]))
        arc = solve_arc_based(g, ArcConfig(alpha=alpha))
        path = solve_path_based(g, SolverConfig(alpha=alpha))
        weight, _ = oracle_optimum(g, alpha)
        assert arc.status == path.status == OPTIMAL
        assert arc.primal == pytest.approx(weight, abs=TOL)
        assert path.primal == pytest.approx(weight, abs=TOL)


def test_fixing_never_changes_the_optimum(rng):
    for _ in range(5):
        g = random_connected_graph(rng, int(rng.integers(4, 8)))
        alpha = float(rng.choice([1.5, 2.0]))
        full = solve_arc_based(g, ArcConfig(alpha=alpha))
        bare = solve_arc_based(
            g, ArcConfig(alpha=alpha, fix_unreachable=False, fix_mandatory=False)
        )
        assert full.status == bare.status == OPTIMAL
        assert full.primal == pytest.approx(bare.primal, abs=TOL)


def test_strict_outflow_tightens_but_preserves_optimum(rng):
    for _ in range(5):
        g = random_connected_graph(rng, int(rng.integers(4, 7)))
        alpha = float(rng.choice([1.5, 2.0]))
        kwargs = dict(fix_unreachable=False, fix_mandatory=False, bg_bound=False)
        strict = build_ab_model(g, alpha, outflow_rhs="strict", **kwargs)
        loose = build_ab_model(g, alpha, outflow_rhs="one", **kwargs)
        assert strict.lp.solve().objective >= loose.lp.solve().objective - TOL
        a = solve_arc_based(g, ArcConfig(alpha=alpha, outflow_rhs="strict"))
        b = solve_arc_based(g, ArcConfig(alpha=alpha, outflow_rhs="one"))
        assert a.primal == pytest.approx(b.primal, abs=TOL)
