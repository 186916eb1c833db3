"""Result and limit types shared by the exact solvers."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .greedy import SpannerSolution, gap_percent

INF = math.inf

OPTIMAL = "optimal"
BOUND_ONLY = "bound_only"
INFEASIBLE = "infeasible"


class TimeLimitExceeded(Exception):
    pass


class Deadline:
    """Cooperative wall-clock limit, polled at node and pricing boundaries."""

    def __init__(self, seconds: float | None):
        self.start = time.perf_counter()
        self.seconds = seconds

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed() > self.seconds

    def check(self) -> None:
        if self.expired():
            raise TimeLimitExceeded


@dataclass
class SolveStats:
    columns_generated: int = 0
    pricing_calls: int = 0
    pruned_calls: int = 0
    free_path_calls: int = 0
    duplicate_columns: int = 0
    repair_columns: int = 0
    pruned_violations: int = 0
    bnb_nodes: int = 0
    lp_solves: int = 0
    root_lp_value: float | None = None
    wall_time: float = 0.0
    time_build: float = 0.0
    time_fix: float = 0.0
    time_solve: float = 0.0
    pairs_fixed: int = 0
    flow_vars_created: int = 0
    flow_vars_omitted: int = 0
    vars_fixed_one: int = 0

    def pruned_share(self) -> float:
        if self.pricing_calls == 0:
            return 0.0
        return 100.0 * self.pruned_calls / self.pricing_calls

    def free_path_share(self) -> float:
        executed = self.pricing_calls - self.pruned_calls
        if executed <= 0:
            return 0.0
        return 100.0 * self.free_path_calls / executed


@dataclass
class SolveResult:
    solver: str
    alpha: float
    status: str
    primal: float | None
    dual: float
    solution: SpannerSolution | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    def gap(self) -> float:
        if self.primal is None or not self.dual > 0:
            return INF
        return gap_percent(self.primal, self.dual)
