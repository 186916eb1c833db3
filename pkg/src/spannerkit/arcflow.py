"""Arc-based multicommodity-flow MILP for the spanner problem.

Each terminal pair ships one unit of flow from u to v over directed copies of
the edges.  Edge variables x_e pay the weight; per pair there are conservation
rows at every touched node, coupling rows f_ij + f_ji <= x_e, one length row
bounding the pair's total flow weight by its budget, and outflow rows capping
the flow leaving each node.  Integrality of x is enforced by branch-and-bound;
an integral x with fractional flows is already a feasible spanner because a
unit flow within the length budget decomposes into at least one within-budget
path.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from dataclasses import dataclass, field

from . import lp as lpmod
from .graph import (
    DIST_TOL,
    TerminalPair,
    WeightedGraph,
    all_pairs_distances,
    build_terminal_pairs,
    dijkstra,
    dijkstra_tree,
    kept_edge_mapping,
    metricate,
    path_from_tree,
)
from .greedy import SpannerSolution, basic_greedy, verify_spanner
from .result import (
    BOUND_ONLY,
    INFEASIBLE,
    OPTIMAL,
    Deadline,
    SolveResult,
    SolveStats,
)

INF = math.inf
INTEGRALITY_TOL = 1e-6

OUTFLOW_MODES = ("strict", "one")


class ArcModelError(RuntimeError):
    pass


@dataclass(frozen=True)
class ArcConfig:
    alpha: float
    pairs_mode: str = "adjacent"
    metricate: bool = True
    fix_unreachable: bool = True
    fix_mandatory: bool = True
    bg_bound: bool = True
    outflow_rhs: str = "strict"
    lp_backend: str = "auto"
    time_limit: float | None = None
    node_limit: int | None = None

    def validate(self) -> None:
        if self.alpha < 1:
            raise ValueError("stretch factor must be at least 1")
        if self.outflow_rhs not in OUTFLOW_MODES:
            raise ValueError(f"unknown outflow mode {self.outflow_rhs!r}")


@dataclass(order=True)
class _AbNode:
    bound: float
    neg_depth: int
    serial: int
    fixed: tuple[tuple[int, float], ...] = field(compare=False)


class AbModel:
    """LP plus the variable bookkeeping of the arc formulation."""

    def __init__(self, graph: WeightedGraph, alpha: float, pairs: list[TerminalPair]):
        self.graph = graph
        self.alpha = alpha
        self.pairs = pairs
        self.lp = lpmod.LinearProgram()
        self.edge_vars: list[int] = []
        self.flow_vars: dict[tuple[int, int, int], int] = {}
        self.fixed_ledger: list[dict] = []
        self.stats = SolveStats()
        self.bg_solution: SpannerSolution | None = None
        self.dist = None

    def ledger_json(self) -> str:
        return json.dumps(self.fixed_ledger, indent=2, sort_keys=True)


def build_ab_model(
    graph: WeightedGraph,
    alpha: float,
    pairs_mode: str = "adjacent",
    *,
    fix_unreachable: bool = True,
    fix_mandatory: bool = True,
    bg_bound: bool = True,
    outflow_rhs: str = "strict",
) -> AbModel:
    """Assemble the arc formulation over the given (already metricated) graph.

    fix_unreachable omits a pair's two arc variables for edge {i, j} entirely
    when no u-v path within budget can traverse the edge in either orientation,
    i.e. min(d(u,i) + w_ij + d(j,v), d(u,j) + w_ij + d(i,v)) exceeds the
    budget.  The test is per edge, not per arc: pruning a single orientation
    whose detour is too long would also cut off fractional points that split
    one unit of flow across several over-budget routes whose average stretch
    is still within budget, and those points can carry the LP optimum.
    fix_mandatory pins x_e = 1 for edges every within-budget u-v path must use
    (removal test on a shortest path's edges), and additionally pins the arc
    when the reverse orientation is unreachable.  bg_bound stores the greedy
    heuristic's subgraph as an incumbent seed for branch-and-bound.
    """
    if alpha < 1:
        raise ArcModelError("stretch factor must be at least 1")
    if outflow_rhs not in OUTFLOW_MODES:
        raise ArcModelError(f"unknown outflow mode {outflow_rhs!r}")
    t0 = time.perf_counter()
    dist = all_pairs_distances(graph)
    pairs = build_terminal_pairs(graph, alpha, pairs_mode, dist)
    model = AbModel(graph, alpha, pairs)
    model.dist = dist
    lp = model.lp
    time_fix = 0.0

    model.edge_vars = [
        lp.add_column(float(graph.weights[e]), lo=0.0, hi=1.0, name=f"x_{e}")
        for e in range(graph.m)
    ]

    def budget_tol(pair: TerminalPair) -> float:
        if graph.integral and float(pair.budget).is_integer():
            return 0.0
        return DIST_TOL

    # Reachability masks per pair: which arcs can appear in a feasible path.
    tf = time.perf_counter()
    reachable: list[dict[tuple[int, int], bool]] = []
    for pair in pairs:
        tol = budget_tol(pair)
        mask: dict[tuple[int, int], bool] = {}
        for e in range(graph.m):
            i, j = graph.edges[e]
            w = graph.weights[e]
            edge_ok = any(
                dist[pair.u, a] + w + dist[b, pair.v] <= pair.budget + tol
                for a, b in ((i, j), (j, i))
            )
            for a, b in ((i, j), (j, i)):
                mask[(a, b)] = edge_ok or not fix_unreachable
                if fix_unreachable and not edge_ok:
                    model.stats.flow_vars_omitted += 1
                    model.fixed_ledger.append(
                        {
                            "var": f"f_{pair.u}_{pair.v}_{a}_{b}",
                            "value": 0,
                            "reason": "unreachable",
                        }
                    )
        reachable.append(mask)
    time_fix += time.perf_counter() - tf

    for idx, pair in enumerate(pairs):
        mask = reachable[idx]
        touched = set()
        out_nodes = set()
        for (a, b), ok in mask.items():
            if ok:
                touched.add(a)
                touched.add(b)
                out_nodes.add(a)
        cons_rows = {}
        for node in sorted(touched):
            rhs = 1.0 if node == pair.u else (-1.0 if node == pair.v else 0.0)
            cons_rows[node] = lp.add_row(
                [], "==", rhs, name=f"kirch_{pair.u}_{pair.v}_{node}"
            )
        stretch_row = lp.add_row(
            [], "<=", float(pair.budget), name=f"stretch_{pair.u}_{pair.v}"
        )
        couple_rows = {}
        for e in range(graph.m):
            i, j = graph.edges[e]
            if mask[(i, j)] or mask[(j, i)]:
                couple_rows[e] = lp.add_row(
                    [(model.edge_vars[e], -1.0)],
                    "<=",
                    0.0,
                    name=f"edgearc_{pair.u}_{pair.v}_{e}",
                )
        outflow_rows = {}
        for node in sorted(out_nodes):
            rhs = 1.0
            if outflow_rhs == "strict" and node == pair.v:
                rhs = 0.0
            outflow_rows[node] = lp.add_row(
                [], "<=", rhs, name=f"outflow_{pair.u}_{pair.v}_{node}"
            )
        for e in range(graph.m):
            i, j = graph.edges[e]
            w = float(graph.weights[e])
            for a, b in ((i, j), (j, i)):
                if not mask[(a, b)]:
                    continue
                entries = [
                    (cons_rows[a], 1.0),
                    (cons_rows[b], -1.0),
                    (stretch_row, w),
                    (couple_rows[e], 1.0),
                    (outflow_rows[a], 1.0),
                ]
                var = lp.add_column(
                    0.0, entries, lo=0.0, hi=1.0, name=f"f_{pair.u}_{pair.v}_{a}_{b}"
                )
                model.flow_vars[(idx, a, b)] = var
                model.stats.flow_vars_created += 1

    if fix_mandatory:
        tf = time.perf_counter()
        fixed_vars: set[int] = set()
        for idx, pair in enumerate(pairs):
            tol = budget_tol(pair)
            _, parents = dijkstra_tree(graph, pair.u)
            path = path_from_tree(graph, parents, pair.u, pair.v) or []
            node = pair.u
            for e in path:
                i, j = graph.edges[e]
                nxt = j if i == node else i
                blocked = dijkstra(graph, pair.u, target=pair.v, forbidden_edges={e})
                if blocked[pair.v] > pair.budget + tol:
                    xvar = model.edge_vars[e]
                    if xvar not in fixed_vars:
                        fixed_vars.add(xvar)
                        lp.set_bounds(xvar, 1.0, 1.0)
                        model.stats.vars_fixed_one += 1
                        model.fixed_ledger.append(
                            {
                                "var": f"x_{e}",
                                "value": 1,
                                "reason": f"mandatory_edge_pair_{pair.u}_{pair.v}",
                            }
                        )
                    w = graph.weights[e]
                    rev_unreachable = (
                        dist[pair.u, nxt] + w + dist[node, pair.v]
                        > pair.budget + tol
                    )
                    fvar = model.flow_vars.get((idx, node, nxt))
                    if rev_unreachable and fvar is not None and fvar not in fixed_vars:
                        fixed_vars.add(fvar)
                        lp.set_bounds(fvar, 1.0, 1.0)
                        model.stats.vars_fixed_one += 1
                        model.fixed_ledger.append(
                            {
                                "var": f"f_{pair.u}_{pair.v}_{node}_{nxt}",
                                "value": 1,
                                "reason": "mandatory_direction",
                            }
                        )
                node = nxt
        time_fix += time.perf_counter() - tf

    if bg_bound:
        greedy = basic_greedy(graph, alpha)
        model.bg_solution = greedy

    model.stats.time_fix = time_fix
    model.stats.time_build = time.perf_counter() - t0 - time_fix
    return model


def export_lp(model: AbModel, path: str) -> None:
    lpmod.write_lp_file(model.lp, path)


def _branch_var(model: AbModel, x: lpmod.LpSolution) -> int | None:
    best = None
    for eid, var in enumerate(model.edge_vars):
        val = x.x[var]
        frac = min(val, 1.0 - val)
        if frac <= INTEGRALITY_TOL:
            continue
        key = (abs(val - 0.5), -float(model.graph.weights[eid]), eid)
        if best is None or key < best[0]:
            best = (key, var)
    if best is not None:
        return best[1]
    for key in sorted(model.flow_vars):
        var = model.flow_vars[key]
        val = x.x[var]
        if min(val, 1.0 - val) > INTEGRALITY_TOL:
            return var
    return None


def solve_ab_model(
    model: AbModel,
    *,
    backend: str = "auto",
    time_limit: float | None = None,
    node_limit: int | None = None,
    to_original: list[int] | None = None,
) -> SolveResult:
    """Branch-and-bound over the arc LP: x variables first, then flows."""
    deadline = Deadline(time_limit)
    graph = model.graph
    stats = model.stats
    mapping = to_original if to_original is not None else list(range(graph.m))
    obj_tol = lambda v: 1e-6 * (1.0 + abs(v))

    incumbent_edges: frozenset[int] | None = None
    incumbent_value = INF
    if model.bg_solution is not None:
        incumbent_edges = frozenset(model.bg_solution.edge_ids)
        incumbent_value = float(model.bg_solution.total_weight)

    base_bounds = {}
    for var in model.edge_vars:
        base_bounds[var] = (model.lp.lo[var], model.lp.hi[var])
    for var in model.flow_vars.values():
        base_bounds[var] = (model.lp.lo[var], model.lp.hi[var])

    def apply(node: _AbNode) -> None:
        fixed_here = dict(node.fixed)
        for var, (lo, hi) in base_bounds.items():
            val = fixed_here.get(var)
            if val is None:
                model.lp.set_bounds(var, lo, hi)
            else:
                model.lp.set_bounds(var, val, val)

    serial = 0
    heap = [_AbNode(-INF, 0, serial, ())]
    limit_hit = False
    proven = False
    t_solve = time.perf_counter()

    while heap:
        if deadline.expired():
            limit_hit = True
            break
        if node_limit is not None and stats.bnb_nodes >= node_limit:
            limit_hit = True
            break
        node = heapq.heappop(heap)
        if (
            incumbent_value < INF
            and node.bound >= incumbent_value - obj_tol(incumbent_value)
        ):
            heapq.heappush(heap, node)
            proven = True
            break
        apply(node)
        sol = model.lp.solve(backend=backend)
        stats.lp_solves += 1
        stats.bnb_nodes += 1
        if sol.status == lpmod.INFEASIBLE:
            continue
        if sol.status != lpmod.OPTIMAL:
            raise ArcModelError(f"arc LP ended with status {sol.status}")
        value = sol.objective
        if node.neg_depth == 0 and stats.root_lp_value is None:
            stats.root_lp_value = value
        if incumbent_value < INF and value >= incumbent_value - obj_tol(value):
            continue
        branch = _branch_var(model, sol)
        if branch is None:
            chosen = frozenset(
                eid
                for eid, var in enumerate(model.edge_vars)
                if sol.x[var] >= 1.0 - INTEGRALITY_TOL
            )
            weight = sum(graph.weights[e] for e in chosen)
            report = verify_spanner(graph, model.alpha, chosen, mode="all", dist=model.dist)
            if not report.feasible:
                raise ArcModelError(
                    f"integral arc solution violates pair {report.worst_pair}"
                )
            if weight < incumbent_value - obj_tol(weight):
                incumbent_value = float(weight)
                incumbent_edges = chosen
            continue
        for val in (0.0, 1.0):
            serial += 1
            heapq.heappush(
                heap,
                _AbNode(value, node.neg_depth - 1, serial, node.fixed + ((branch, val),)),
            )

    stats.time_solve = time.perf_counter() - t_solve
    stats.wall_time = deadline.elapsed()

    if incumbent_edges is None:
        if heap:
            best_open = min(n.bound for n in heap)
            dual = best_open if best_open > -INF else 0.0
            return SolveResult("ab", model.alpha, BOUND_ONLY, None, dual, None, stats)
        return SolveResult("ab", model.alpha, INFEASIBLE, None, INF, None, stats)

    primal = float(incumbent_value)
    solution = SpannerSolution(
        tuple(sorted(mapping[e] for e in incumbent_edges)), primal, model.alpha
    )
    if limit_hit and not proven and heap:
        best_open = min(n.bound for n in heap)
        if best_open < primal - obj_tol(primal):
            dual = best_open if best_open > -INF else 0.0
            return SolveResult("ab", model.alpha, BOUND_ONLY, primal, dual, solution, stats)
    return SolveResult("ab", model.alpha, OPTIMAL, primal, primal, solution, stats)


def solve_arc_based(graph: WeightedGraph, config: ArcConfig) -> SolveResult:
    """Metricate, build, fix, and solve; maps edge ids back to the input graph."""
    config.validate()
    if config.metricate:
        work, removed = metricate(graph)
        mapping = kept_edge_mapping(graph, removed)
    else:
        work = graph
        mapping = list(range(graph.m))
    model = build_ab_model(
        work,
        config.alpha,
        config.pairs_mode,
        fix_unreachable=config.fix_unreachable,
        fix_mandatory=config.fix_mandatory,
        bg_bound=config.bg_bound,
        outflow_rhs=config.outflow_rhs,
    )
    return solve_ab_model(
        model,
        backend=config.lp_backend,
        time_limit=config.time_limit,
        node_limit=config.node_limit,
        to_original=mapping,
    )
