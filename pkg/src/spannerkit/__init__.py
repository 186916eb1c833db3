"""Exact and heuristic solvers for minimum-weight multiplicative graph spanners."""

from .arcflow import AbModel, ArcConfig, build_ab_model, export_lp, solve_ab_model, solve_arc_based
from .colgen import PathBasedSolver, SolverConfig, solve_path_based
from .graph import (
    DistanceMatrix,
    GraphError,
    TerminalPair,
    WeightedGraph,
    all_pairs_distances,
    build_graph,
    build_terminal_pairs,
    dijkstra,
    is_connected,
    metricate,
)
from .greedy import SpannerSolution, VerifyReport, basic_greedy, gap_percent, verify_spanner
from .instances import (
    Instance,
    InstanceSpec,
    generate,
    make_c4_witness,
    make_fixture,
    make_k5_subdivision_witness,
    read_instance,
    write_instance,
)
from .lp import LinearProgram, LpError, LpSolution, read_lp_file, write_lp_file
from .oracle import OracleSizeError, oracle_optimum
from .paths import enumerate_all_bounded, k_shortest_bounded, unique_path_detect
from .pricing import (
    PricingCache,
    PricingProblem,
    bidirectional_front_search,
    cheapest_feasible_path,
)
from .result import Deadline, SolveResult, SolveStats

__version__ = "0.1.0"

__all__ = [
    "AbModel",
    "ArcConfig",
    "Deadline",
    "DistanceMatrix",
    "GraphError",
    "Instance",
    "InstanceSpec",
    "LinearProgram",
    "LpError",
    "LpSolution",
    "OracleSizeError",
    "PathBasedSolver",
    "PricingCache",
    "PricingProblem",
    "SolveResult",
    "SolveStats",
    "SolverConfig",
    "SpannerSolution",
    "TerminalPair",
    "VerifyReport",
    "WeightedGraph",
    "all_pairs_distances",
    "basic_greedy",
    "bidirectional_front_search",
    "build_ab_model",
    "build_graph",
    "build_terminal_pairs",
    "cheapest_feasible_path",
    "dijkstra",
    "enumerate_all_bounded",
    "export_lp",
    "gap_percent",
    "generate",
    "is_connected",
    "k_shortest_bounded",
    "make_c4_witness",
    "make_fixture",
    "make_k5_subdivision_witness",
    "metricate",
    "oracle_optimum",
    "read_instance",
    "read_lp_file",
    "solve_ab_model",
    "solve_arc_based",
    "solve_path_based",
    "unique_path_detect",
    "verify_spanner",
    "write_instance",
    "write_lp_file",
]
