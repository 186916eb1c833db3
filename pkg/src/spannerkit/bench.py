"""Benchmark harness: run solvers over instance suites, emit JSONL and CSV.

Output contract (documented field by field in the README):

JSON lines, one record per (instance, solver) run, keys sorted:
  alpha        stretch factor
  dual         best proven lower bound (0.0 when the solver provides none)
  gap          percent gap between primal and dual, null when undefined
  instance     instance label
  primal       best feasible value, null when none was found
  provenance   generator fingerprint: family, n, density, weights, seed, ...
  solver       one of pb | ab | bg | oracle
  stats        solver counters (columns, calls, pruned/free-path shares, ...)
  status       optimal | bound_only | infeasible | heuristic
  wall_time    seconds (excluded from the reproducibility fingerprint)

Aggregate CSV, one line per (family, n, weight, alpha, solver) group:
  family, n, weight, alpha, solver, runs, optimal, time_median_s, time_iqr_s,
  gap_median_pct, gap_iqr_pct, primal_median
Medians and interquartile ranges; non-finite gaps are excluded from the gap
columns.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, field

from .arcflow import ArcConfig, solve_arc_based
from .colgen import SolverConfig, solve_path_based
from .greedy import basic_greedy, gap_percent
from .instances import Instance, InstanceSpec, generate
from .oracle import oracle_optimum
from .result import OPTIMAL

INF = math.inf

SOLVER_IDS = ("pb", "ab", "bg", "oracle")


@dataclass
class RunRecord:
    instance: str
    provenance: dict
    solver: str
    alpha: float
    status: str
    primal: float | None
    dual: float
    gap: float | None
    wall_time: float
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(_finite(self.to_dict()), sort_keys=True)

    def fingerprint(self) -> str:
        """Canonical form for reproducibility checks: timing fields masked."""
        data = _finite(self.to_dict())
        data["wall_time"] = 0.0
        stats = dict(data.get("stats") or {})
        for key in list(stats):
            if key.startswith("time_") or key == "wall_time":
                stats[key] = 0.0
        data["stats"] = stats
        return json.dumps(data, sort_keys=True)


def _finite(value):
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _stats_dict(stats) -> dict:
    data = asdict(stats)
    data["pruned_pct"] = stats.pruned_share()
    data["free_path_pct"] = stats.free_path_share()
    return data


def run_solver(
    instance: Instance,
    solver: str,
    alpha: float,
    *,
    pb_config: SolverConfig | None = None,
    ab_config: ArcConfig | None = None,
    pairs_mode: str = "adjacent",
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> RunRecord:
    """Run one solver on one instance and capture the record."""
    if solver not in SOLVER_IDS:
        raise ValueError(f"unknown solver {solver!r}")
    graph = instance.graph
    provenance = dict(instance.provenance)
    if instance.spec is not None:
        provenance["spec"] = asdict(instance.spec)
    start = time.perf_counter()
    if solver == "pb":
        config = pb_config or SolverConfig(
            alpha=alpha,
            pairs_mode=pairs_mode,
            time_limit=time_limit,
            node_limit=node_limit,
        )
        result = solve_path_based(graph, config)
        provenance["config"] = asdict(config)
        return RunRecord(
            instance.name,
            provenance,
            solver,
            alpha,
            result.status,
            result.primal,
            result.dual if math.isfinite(result.dual) else 0.0,
            _gap_or_none(result.primal, result.dual),
            result.stats.wall_time,
            _stats_dict(result.stats),
        )
    if solver == "ab":
        config = ab_config or ArcConfig(
            alpha=alpha,
            pairs_mode=pairs_mode,
            time_limit=time_limit,
            node_limit=node_limit,
        )
        result = solve_arc_based(graph, config)
        provenance["config"] = asdict(config)
        return RunRecord(
            instance.name,
            provenance,
            solver,
            alpha,
            result.status,
            result.primal,
            result.dual if math.isfinite(result.dual) else 0.0,
            _gap_or_none(result.primal, result.dual),
            result.stats.wall_time,
            _stats_dict(result.stats),
        )
    if solver == "bg":
        solution = basic_greedy(graph, alpha)
        elapsed = time.perf_counter() - start
        return RunRecord(
            instance.name,
            provenance,
            solver,
            alpha,
            "heuristic",
            float(solution.total_weight),
            0.0,
            None,
            elapsed,
            {"edges": len(solution.edge_ids)},
        )
    value, edges = oracle_optimum(graph, alpha)
    elapsed = time.perf_counter() - start
    return RunRecord(
        instance.name,
        provenance,
        solver,
        alpha,
        OPTIMAL,
        float(value),
        float(value),
        0.0,
        elapsed,
        {"edges": len(edges)},
    )


def _gap_or_none(primal: float | None, dual: float) -> float | None:
    if primal is None or not math.isfinite(dual) or dual <= 0:
        return None
    return gap_percent(primal, dual)


def write_jsonl(records: list[RunRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")


def read_jsonl(path: str) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def _median_iqr(values: list[float]) -> tuple[float | None, float | None]:
    data = [v for v in values if v is not None and math.isfinite(v)]
    if not data:
        return None, None
    med = statistics.median(data)
    if len(data) < 2:
        return med, 0.0
    q1, _, q3 = statistics.quantiles(data, n=4)
    return med, q3 - q1


CSV_FIELDS = [
    "family",
    "n",
    "weight",
    "alpha",
    "solver",
    "runs",
    "optimal",
    "time_median_s",
    "time_iqr_s",
    "gap_median_pct",
    "gap_iqr_pct",
    "primal_median",
]


def write_csv(records: list[RunRecord], path: str) -> None:
    """Aggregate records into medians and IQRs per instance group."""
    groups: dict[tuple, list[RunRecord]] = {}
    for record in records:
        spec = record.provenance.get("spec", {})
        key = (
            spec.get("family", "?"),
            spec.get("n", 0),
            spec.get("weight_model", "?"),
            record.alpha,
            record.solver,
        )
        groups.setdefault(key, []).append(record)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
            bucket = groups[key]
            time_med, time_iqr = _median_iqr([r.wall_time for r in bucket])
            gap_med, gap_iqr = _median_iqr([r.gap for r in bucket])
            primal_med, _ = _median_iqr(
                [r.primal for r in bucket if r.primal is not None]
            )
            writer.writerow(
                {
                    "family": key[0],
                    "n": key[1],
                    "weight": key[2],
                    "alpha": key[3],
                    "solver": key[4],
                    "runs": len(bucket),
                    "optimal": sum(1 for r in bucket if r.status == OPTIMAL),
                    "time_median_s": time_med,
                    "time_iqr_s": time_iqr,
                    "gap_median_pct": gap_med,
                    "gap_iqr_pct": gap_iqr,
                    "primal_median": primal_med,
                }
            )


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def small_oracle_suite(count: int = 108) -> list[tuple[Instance, float]]:
    """Small random instances with oracle-checkable optima.

    Erdos-Renyi p=0.5 graphs, all three weight models, stretch factors
    {1.5, 2, 3}; unit weights are paired only with integer stretch factors.
    Sizes stay at or below 10 nodes (8 for the pure-enumeration worst case,
    unit weights with alpha 3, where the optimum is small but the subset
    order statistic is deep).
    """
    combos = []
    for weights in ("w1", "euc", "wn"):
        for alpha in (1.5, 2.0, 3.0):
            if weights == "w1" and alpha != int(alpha):
                continue
            combos.append((weights, alpha))
    out: list[tuple[Instance, float]] = []
    idx = 0
    while len(out) < count:
        weights, alpha = combos[idx % len(combos)]
        seed = 1000 + idx
        if weights == "w1" and alpha >= 3:
            n = 6 + (idx % 3)
        else:
            n = 7 + (idx % 4)
        spec = InstanceSpec(
            family="er",
            n=n,
            density_mode="rel",
            density_value=0.5,
            weight_model=weights,
            seed=seed,
        )
        out.append((generate(spec), alpha))
        idx += 1
    return out


def bg_gap_suite(count: int = 50) -> list[tuple[Instance, float]]:
    out = []
    for i in range(count):
        spec = InstanceSpec(
            family="er",
            n=20,
            density_mode="deg",
            density_value=4.0,
            weight_model="wn",
            seed=2000 + i,
        )
        out.append((generate(spec), 2.0))
    return out


def metrication_suite(count: int = 50) -> list[tuple[Instance, float]]:
    out = []
    for i in range(count):
        n = 12 + (i % 9)
        spec = InstanceSpec(
            family="er",
            n=n,
            density_mode="rel",
            density_value=0.35,
            weight_model="wn",
            seed=3000 + i,
        )
        out.append((generate(spec), 2.0))
    return out


def smoke_suite() -> list[tuple[Instance, float]]:
    """Four tiny instances for exercising the harness end to end."""
    out = []
    for i in range(4):
        spec = InstanceSpec(
            family="er",
            n=6,
            density_mode="rel",
            density_value=0.5,
            weight_model="wn",
            seed=500 + i,
        )
        out.append((generate(spec), 2.0))
    return out


def large_suite() -> list[tuple[Instance, float]]:
    spec = InstanceSpec(
        family="er",
        n=100,
        density_mode="deg",
        density_value=4.0,
        weight_model="wn",
        seed=4100,
    )
    return [(generate(spec), 2.0)]


SUITES = {
    "small-oracle": small_oracle_suite,
    "bg-gap": bg_gap_suite,
    "metrication": metrication_suite,
    "smoke": smoke_suite,
    "large": large_suite,
}


def run_suite(
    name: str,
    solvers: list[str] | None = None,
    *,
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> list[RunRecord]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    chosen = solvers or ["pb", "ab", "bg"]
    records = []
    for instance, alpha in SUITES[name]():
        for solver in chosen:
            records.append(
                run_solver(
                    instance,
                    solver,
                    alpha,
                    time_limit=time_limit,
                    node_limit=node_limit,
                )
            )
    return records
