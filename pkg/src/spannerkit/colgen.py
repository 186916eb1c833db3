"""Exact spanner solver on the path formulation: column generation plus branch-and-bound.

The restricted master problem minimizes total edge weight over edge variables
x_e and path variables y_P.  Each terminal pair (u, v) carries one covering row
(sum of its y_P at least 1, dual sigma) and, lazily, one linking row per edge
used by one of its paths (x_e minus the pair's y_P through e at least 0, dual
pi).  Columns are priced by budget-constrained cheapest-path search: a path is
improving exactly when its pi-cost is below sigma.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from . import lp as lpmod
from .graph import (
    DIST_TOL,
    TerminalPair,
    WeightedGraph,
    all_pairs_distances,
    build_terminal_pairs,
    dijkstra_tree,
    kept_edge_mapping,
    metricate,
    path_from_tree,
)
from .greedy import SpannerSolution, basic_greedy, verify_spanner
from .paths import enumerate_all_bounded, k_shortest_bounded, unique_path_detect
from .pricing import (
    PricingCache,
    PricingProblem,
    bidirectional_front_search,
    cheapest_feasible_path,
)
from .result import (
    BOUND_ONLY,
    INFEASIBLE,
    OPTIMAL,
    Deadline,
    SolveResult,
    SolveStats,
    TimeLimitExceeded,
)

INF = math.inf

INIT_STRATEGIES = ("ksp1", "kspk+bg", "brute")
PRICERS = ("basic", "bia")

INTEGRALITY_TOL = 1e-6
SIGMA_SKIP_TOL = 1e-9
DUAL_CERT_TOL = 1e-6


class ColumnGenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    pairs_mode: str = "adjacent"
    init: str = "kspk+bg"
    k: int = 10
    mu: int | None = 3
    pricer: str = "bia"
    metricate: bool = True
    fix_mandatory: bool = True
    prune_cache: bool = True
    lp_backend: str = "auto"
    time_limit: float | None = None
    node_limit: int | None = None
    root_iteration_cap: int = 100_000
    test_force_pruned: bool = False

    def validate(self) -> None:
        if self.alpha < 1:
            raise ValueError("stretch factor must be at least 1")
        if self.init not in INIT_STRATEGIES:
            raise ValueError(f"unknown init strategy {self.init!r}")
        if self.pricer not in PRICERS:
            raise ValueError(f"unknown pricer {self.pricer!r}")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.mu is not None and self.mu < 1:
            raise ValueError("mu must be positive or None")


@dataclass(frozen=True)
class PathColumn:
    pair_idx: int
    edges: tuple[int, ...]
    edge_set: frozenset[int]
    var: int


@dataclass
class DualSolution:
    sigma: list[float]
    pi: list[dict[int, float]]


@dataclass(order=True)
class _Node:
    bound: float
    neg_depth: int
    serial: int
    fixed_zero: frozenset[int] = field(compare=False)
    fixed_one: frozenset[int] = field(compare=False)


class RmpState:
    """Bookkeeping that maps graph objects onto LP rows and columns."""

    def __init__(self, graph: WeightedGraph, pairs: list[TerminalPair], backend: str):
        self.graph = graph
        self.pairs = pairs
        self.backend = backend
        self.lp = lpmod.LinearProgram()
        self.edge_vars = [
            self.lp.add_column(float(graph.weights[e]), lo=0.0, hi=1.0, name=f"x_{e}")
            for e in range(graph.m)
        ]
        self.pair_rows = [
            self.lp.add_row([], ">=", 1.0, name=f"cover_{p.u}_{p.v}") for p in pairs
        ]
        self.edge_rows: dict[tuple[int, int], int] = {}
        self.columns: list[PathColumn] = []
        self.column_keys: set[tuple[int, tuple[int, ...]]] = set()
        self.pair_fixed = [False] * len(pairs)

    def _edge_row(self, pair_idx: int, eid: int) -> int:
        key = (pair_idx, eid)
        row = self.edge_rows.get(key)
        if row is None:
            pair = self.pairs[pair_idx]
            row = self.lp.add_row(
                [(self.edge_vars[eid], 1.0)], ">=", 0.0, name=f"link_{pair.u}_{pair.v}_{eid}"
            )
            self.edge_rows[key] = row
        return row

    def add_path_column(self, pair_idx: int, edges: tuple[int, ...]) -> bool:
        """Add y_P for a pair path; returns False when the column already exists.

        Path variables get an infinite upper bound: y_P <= 1 is implied by the
        linking rows together with x_e <= 1, and leaving it implicit keeps
        every stored column's reduced cost sign-constrained at its lower bound.
        """
        key = (pair_idx, tuple(edges))
        if key in self.column_keys:
            return False
        entries = [(self.pair_rows[pair_idx], 1.0)]
        entries.extend((self._edge_row(pair_idx, e), -1.0) for e in edges)
        pair = self.pairs[pair_idx]
        var = self.lp.add_column(
            0.0, entries, lo=0.0, hi=INF, name=f"y_{pair.u}_{pair.v}_{len(self.columns)}"
        )
        self.column_keys.add(key)
        self.columns.append(PathColumn(pair_idx, tuple(edges), frozenset(edges), var))
        return True

    def solve(self) -> lpmod.LpSolution:
        return self.lp.solve(backend=self.backend)

    def extract_duals(self, sol: lpmod.LpSolution) -> DualSolution:
        sigma = [max(0.0, sol.duals[r]) for r in self.pair_rows]
        pi: list[dict[int, float]] = [dict() for _ in self.pairs]
        for (pair_idx, eid), row in self.edge_rows.items():
            val = sol.duals[row]
            if val > 0.0:
                pi[pair_idx][eid] = val
        return DualSolution(sigma, pi)


class PathBasedSolver:
    """Branch-and-price driver over the path formulation."""

    def __init__(self, graph: WeightedGraph, config: SolverConfig):
        config.validate()
        self.config = config
        self.original = graph
        if config.metricate:
            self.graph, removed = metricate(graph)
            self.to_original = kept_edge_mapping(graph, removed)
        else:
            self.graph = graph
            self.to_original = list(range(graph.m))
        self.dist = all_pairs_distances(self.graph)
        self.pairs = build_terminal_pairs(self.graph, config.alpha, config.pairs_mode, self.dist)
        self.stats = SolveStats()
        self.state = RmpState(self.graph, self.pairs, config.lp_backend)
        self._weight_rows: dict[int, list[float]] = {}
        self._initialized = False
        self._base_bounds: list[tuple[float, float]] | None = None
        self.root_duals: DualSolution | None = None
        self.pruned_violation_log: list[tuple[int, tuple[int, ...]]] = []
        self.node_trace: list[tuple[int, float, float]] = []
        self.incumbent_edges: frozenset[int] | None = None
        self.incumbent_value = INF

    # -- helpers -----------------------------------------------------------

    def _weights_from(self, node: int) -> list[float]:
        row = self._weight_rows.get(node)
        if row is None:
            row = [float(self.dist.dist[node, j]) for j in range(self.graph.n)]
            self._weight_rows[node] = row
        return row

    def _budget_tol(self, pair: TerminalPair) -> float:
        if self.graph.integral and float(pair.budget).is_integer():
            return 0.0
        return DIST_TOL

    def _objective_tol(self, value: float) -> float:
        return 1e-6 * (1.0 + abs(value))

    # -- initialization ----------------------------------------------------

    def initialize(self) -> None:
        """Seed the master problem per the configured strategy."""
        if self._initialized:
            return
        cfg = self.config
        if cfg.init == "ksp1":
            for idx, pair in enumerate(self.pairs):
                paths = k_shortest_bounded(self.graph, pair, 1, self._weights_from(pair.v))
                for p in paths:
                    self.state.add_path_column(idx, p.edges)
        elif cfg.init == "brute":
            for idx, pair in enumerate(self.pairs):
                for p in enumerate_all_bounded(self.graph, pair, self._weights_from(pair.v)):
                    self.state.add_path_column(idx, p.edges)
        else:
            greedy = basic_greedy(self.graph, cfg.alpha)
            self._install_incumbent(frozenset(greedy.edge_ids))
            chosen = set(greedy.edge_ids)
            forbidden = frozenset(e for e in range(self.graph.m) if e not in chosen)
            for idx, pair in enumerate(self.pairs):
                seen: set[tuple[int, ...]] = set()
                for p in k_shortest_bounded(self.graph, pair, cfg.k, self._weights_from(pair.v)):
                    seen.add(p.edges)
                    self.state.add_path_column(idx, p.edges)
                tree_dist, parents = dijkstra_tree(
                    self.graph, pair.u, forbidden_edges=forbidden
                )
                if tree_dist[pair.v] <= pair.budget + self._budget_tol(pair):
                    walk = path_from_tree(self.graph, parents, pair.u, pair.v)
                    if walk is not None and tuple(walk) not in seen:
                        self.state.add_path_column(idx, tuple(walk))
        self.stats.columns_generated = len(self.state.columns)
        self._initialized = True

    def fix_mandatory(self) -> int:
        """Detect unique-path pairs and pin their path and edges to 1.

        A pair whose budget admits exactly one u-v path must route on it, so
        the path variable is bounded below by 1 and each of its edges is fixed
        to 1.  Such pairs are skipped by pricing for the rest of the solve.
        Returns the number of pairs fixed.
        """
        self.initialize()
        fixed = 0
        for idx, pair in enumerate(self.pairs):
            if self.state.pair_fixed[idx]:
                continue
            only = unique_path_detect(self.graph, pair, self._weights_from(pair.v))
            if only is None:
                continue
            self.state.add_path_column(idx, only.edges)
            col = next(
                c for c in self.state.columns
                if c.pair_idx == idx and c.edges == only.edges
            )
            self.state.lp.set_bounds(col.var, 1.0, INF)
            for e in only.edges:
                self.state.lp.fix_variable(self.state.edge_vars[e], 1.0)
            self.state.pair_fixed[idx] = True
            fixed += 1
        self.stats.pairs_fixed = fixed
        self.stats.columns_generated = len(self.state.columns)
        return fixed

    def _install_incumbent(self, edges: frozenset[int]) -> bool:
        value = sum(self.graph.weights[e] for e in edges)
        if value >= self.incumbent_value - self._objective_tol(value):
            return False
        report = verify_spanner(
            self.graph, self.config.alpha, edges, mode="all", dist=self.dist
        )
        if not report.feasible:
            raise ColumnGenerationError(
                f"candidate incumbent violates pair {report.worst_pair}: "
                f"distance {report.worst_distance} exceeds budget {report.worst_budget}"
            )
        self.incumbent_edges = edges
        self.incumbent_value = value
        return True

    # -- pricing -----------------------------------------------------------

    def _run_pricer(self, problem: PricingProblem):
        if self.config.pricer == "basic":
            return cheapest_feasible_path(
                self.graph, problem, self._weights_from(problem.v)
            )
        return bidirectional_front_search(
            self.graph,
            problem,
            self._weights_from(problem.u),
            self._weights_from(problem.v),
        )

    def price_all(
        self,
        duals: DualSolution,
        zero_edges: frozenset[int],
        cache: PricingCache | None,
    ) -> int:
        """One pricing sweep; returns the number of columns added."""
        added = 0
        mu = self.config.mu if self.config.pricer == "bia" else 1
        for idx, pair in enumerate(self.pairs):
            if self.state.pair_fixed[idx]:
                continue
            sigma = duals.sigma[idx]
            if sigma <= SIGMA_SKIP_TOL:
                continue
            self.stats.pricing_calls += 1
            edge_cost = dict(duals.pi[idx])
            for e in zero_edges:
                edge_cost[e] = sigma
            problem = PricingProblem(pair.u, pair.v, pair.budget, sigma, edge_cost, mu)
            if (
                self.config.prune_cache
                and cache is not None
                and cache.should_skip(idx, problem)
            ):
                self.stats.pruned_calls += 1
                if self.config.test_force_pruned:
                    forced = self._run_pricer(problem)
                    forced = [p for p in forced if not (set(p.edges) & zero_edges)]
                    if forced:
                        self.stats.pruned_violations += len(forced)
                        self.pruned_violation_log.extend(
                            (idx, p.edges) for p in forced
                        )
                continue
            found = self._run_pricer(problem)
            found = [p for p in found if not (set(p.edges) & zero_edges)]
            if found and found[0].cost <= SIGMA_SKIP_TOL:
                self.stats.free_path_calls += 1
            new_here = 0
            for p in found:
                if self.state.add_path_column(idx, p.edges):
                    new_here += 1
                else:
                    self.stats.duplicate_columns += 1
            if not found and cache is not None:
                cache.record_zero(idx, problem)
            added += new_here
        self.stats.columns_generated = len(self.state.columns)
        return added

    # -- LP over columns ---------------------------------------------------

    def solve_root(
        self,
        zero_edges: frozenset[int] = frozenset(),
        deadline: Deadline | None = None,
    ) -> tuple[lpmod.LpSolution | None, DualSolution | None]:
        """Run column generation to LP optimality under the given zero-fixes.

        Returns (solution, duals); (None, None) signals an infeasible node.
        Fixed-to-zero edges are not removed from the LP (their bounds do the
        work); pricing sees them at cost sigma so no replacement path can use
        them and look improving.
        """
        self.initialize()
        cache = PricingCache()
        iterations = 0
        while True:
            if deadline is not None:
                deadline.check()
            sol = self.state.solve()
            self.stats.lp_solves += 1
            if sol.status == lpmod.INFEASIBLE:
                return None, None
            if sol.status != lpmod.OPTIMAL:
                raise ColumnGenerationError(f"master LP ended with status {sol.status}")
            duals = self.state.extract_duals(sol)
            added = self.price_all(duals, zero_edges, cache)
            if added == 0:
                return sol, duals
            iterations += 1
            if iterations > self.config.root_iteration_cap:
                raise ColumnGenerationError(
                    f"column generation exceeded {self.config.root_iteration_cap} "
                    f"iterations ({len(self.state.columns)} columns, "
                    f"objective {sol.objective:.6f})"
                )

    def check_dual_feasibility_exhaustive(
        self, duals: DualSolution
    ) -> list[tuple[int, tuple[int, ...], float, float]]:
        """Enumerate every feasible path of every pair and report dual violations.

        A violation is a path whose pi-cost is below sigma - 1e-6: pricing
        should have produced it.  Returns an empty list when the duals price
        out, i.e. the reported LP value is a true lower bound.
        """
        violations = []
        for idx, pair in enumerate(self.pairs):
            sigma = duals.sigma[idx]
            pi = duals.pi[idx]
            for p in enumerate_all_bounded(self.graph, pair, self._weights_from(pair.v)):
                cost = sum(pi.get(e, 0.0) for e in p.edges)
                if cost < sigma - DUAL_CERT_TOL:
                    violations.append((idx, p.edges, cost, sigma))
        return violations

    # -- branch and bound ----------------------------------------------------

    def _snapshot_bounds(self) -> None:
        if self._base_bounds is None:
            self._base_bounds = [
                (self.state.lp.lo[v], self.state.lp.hi[v]) for v in self.state.edge_vars
            ]

    def _apply_node(self, node: _Node) -> None:
        assert self._base_bounds is not None
        for eid, var in enumerate(self.state.edge_vars):
            lo, hi = self._base_bounds[eid]
            if eid in node.fixed_zero:
                lo, hi = 0.0, 0.0
            elif eid in node.fixed_one:
                lo, hi = 1.0, 1.0
            self.state.lp.set_bounds(var, lo, hi)

    def _repair_node(self, node: _Node) -> bool:
        """Ensure every pair has a column avoiding the node's zero edges."""
        if not node.fixed_zero:
            return True
        alive = list(self.state.pair_fixed)
        for col in self.state.columns:
            if not alive[col.pair_idx] and not (col.edge_set & node.fixed_zero):
                alive[col.pair_idx] = True
        for idx, pair in enumerate(self.pairs):
            if alive[idx]:
                continue
            tree_dist, parents = dijkstra_tree(
                self.graph, pair.u, forbidden_edges=node.fixed_zero
            )
            if tree_dist[pair.v] > pair.budget + self._budget_tol(pair):
                return False
            walk = path_from_tree(self.graph, parents, pair.u, pair.v)
            if walk is None:
                return False
            if self.state.add_path_column(idx, tuple(walk)):
                self.stats.repair_columns += 1
        return True

    def _branch_edge(self, x: list[float]) -> int | None:
        best = None
        for eid, val in enumerate(x):
            frac = min(val, 1.0 - val)
            if frac <= INTEGRALITY_TOL:
                continue
            key = (abs(val - 0.5), -float(self.graph.weights[eid]), eid)
            if best is None or key < best[0]:
                best = (key, eid)
        return None if best is None else best[1]

    def solve(self) -> SolveResult:
        deadline = Deadline(self.config.time_limit)
        cfg = self.config
        self.initialize()
        if cfg.fix_mandatory:
            self.fix_mandatory()
        self._snapshot_bounds()

        serial = 0
        heap: list[_Node] = [_Node(-INF, 0, serial, frozenset(), frozenset())]
        limit_hit = False
        proven = False

        while heap:
            if deadline.expired():
                limit_hit = True
                break
            if cfg.node_limit is not None and self.stats.bnb_nodes >= cfg.node_limit:
                limit_hit = True
                break
            node = heapq.heappop(heap)
            if (
                self.incumbent_value < INF
                and node.bound >= self.incumbent_value - self._objective_tol(self.incumbent_value)
            ):
                heapq.heappush(heap, node)
                proven = True
                break
            self._apply_node(node)
            if not self._repair_node(node):
                continue
            try:
                sol, duals = self.solve_root(node.fixed_zero, deadline)
            except TimeLimitExceeded:
                heapq.heappush(heap, node)
                limit_hit = True
                break
            self.stats.bnb_nodes += 1
            if sol is None:
                continue
            value = sol.objective
            self.node_trace.append((-node.neg_depth, node.bound, value))
            if node.neg_depth == 0 and self.stats.root_lp_value is None:
                self.stats.root_lp_value = value
                self.root_duals = duals
            if value >= self.incumbent_value - self._objective_tol(value):
                continue
            x = [sol.x[v] for v in self.state.edge_vars]
            branch = self._branch_edge(x)
            if branch is None:
                chosen = frozenset(
                    eid for eid, val in enumerate(x) if val >= 1.0 - INTEGRALITY_TOL
                )
                self._install_incumbent(chosen)
                continue
            for zero in (False, True):
                serial += 1
                child = _Node(
                    value,
                    node.neg_depth - 1,
                    serial,
                    node.fixed_zero | {branch} if zero else node.fixed_zero,
                    node.fixed_one if zero else node.fixed_one | {branch},
                )
                heapq.heappush(heap, child)

        self.stats.wall_time = deadline.elapsed()
        self.stats.columns_generated = len(self.state.columns)

        if self.incumbent_edges is None:
            if heap:
                best_open = min(n.bound for n in heap)
                dual = best_open if best_open > -INF else 0.0
                return SolveResult("pb", cfg.alpha, BOUND_ONLY, None, dual, None, self.stats)
            return SolveResult("pb", cfg.alpha, INFEASIBLE, None, INF, None, self.stats)

        primal = float(self.incumbent_value)
        solution = SpannerSolution(
            tuple(sorted(self.to_original[e] for e in self.incumbent_edges)),
            primal,
            cfg.alpha,
        )
        if limit_hit and not proven and heap:
            best_open = min(n.bound for n in heap)
            if best_open < primal - self._objective_tol(primal):
                dual = best_open if best_open > -INF else 0.0
                return SolveResult(
                    "pb", cfg.alpha, BOUND_ONLY, primal, dual, solution, self.stats
                )
        return SolveResult("pb", cfg.alpha, OPTIMAL, primal, primal, solution, self.stats)


def solve_path_based(graph: WeightedGraph, config: SolverConfig) -> SolveResult:
    solver = PathBasedSolver(graph, config)
    return solver.solve()
